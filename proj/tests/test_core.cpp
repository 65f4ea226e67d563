#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "fixtures.hpp"

using namespace twoone;

namespace {

std::set<Element> as_set(const std::vector<Element>& v) { return {v.begin(), v.end()}; }

Structure shift_chain() {
  // y -> y + 1 except 0 -> 0 and 1 -> 0 patched in, so forward orbits of
  // x >= 2 strictly increase.
  return Structure("shift", [](Element x) { return x <= 1 ? 0 : x + 1; });
}

}  // namespace

TEST(Apply, ClosedFormExamples) {
  const auto a = structure_prop33A();
  EXPECT_EQ(apply(a, 6), 5u);
  EXPECT_EQ(apply(a, 0), 0u);
  EXPECT_EQ(apply(a, 12), 6u);
}

TEST(Iterate, Examples) {
  const auto a = structure_prop33A();
  EXPECT_EQ(iterate(a, 8, 3), 1u);
  EXPECT_EQ(iterate(a, 7, 5), 7u);
  for (Element x : {0u, 3u, 17u, 1000u}) EXPECT_EQ(iterate(a, x, 0), x);
}

TEST(Apply, ClosedFormMatchesIndependentCopy) {
  const auto a = structure_prop33A();
  for (Element x = 0; x <= 10000; ++x) ASSERT_EQ(apply(a, x), fixtures::closed_form_copy(x)) << x;
}

TEST(Apply, MemoPurity) {
  const auto a = structure_prop33A();
  std::vector<Element> first;
  for (Element x = 0; x < 500; ++x) first.push_back(apply(a, x));
  for (Element x = 0; x < 500; ++x) EXPECT_EQ(apply(a, x), first[x]);
  EXPECT_TRUE(a.memo_consistent());
  EXPECT_GE(a.memo_size(), 500u);
}

TEST(Apply, ConcurrentCallsAgree) {
  const auto a = structure_prop33A();
  std::vector<std::thread> pool;
  std::vector<int> bad(4, 0);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (Element x = 0; x < 3000; ++x) {
        if (apply(a, x) != fixtures::closed_form_copy(x)) ++bad[t];
        if (x % 97 == 0 && preimages(a, x, 2 * x + 2).found.size() > 2) ++bad[t];
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int b : bad) EXPECT_EQ(b, 0);
  EXPECT_TRUE(a.memo_consistent());
}

TEST(Preimages, Examples) {
  const auto a = structure_prop33A();
  auto p = preimages(a, 5, 100);
  EXPECT_EQ(as_set(p.found), (std::set<Element>{5, 6}));
  EXPECT_TRUE(p.complete);
  p = preimages(a, 3, 100);
  EXPECT_EQ(as_set(p.found), (std::set<Element>{3}));
  EXPECT_TRUE(p.complete);
  p = preimages(a, 5, 4);
  EXPECT_TRUE(p.found.empty());
  EXPECT_FALSE(p.complete);
}

TEST(Preimages, NoOracleNeverComplete) {
  const auto a = without_oracles(structure_prop33A());
  const auto p = preimages(a, 5, 100);
  EXPECT_EQ(p.found.size(), 2u);
  EXPECT_FALSE(p.complete);
}

TEST(Preimages, OracleViolationWhenOracleUndercounts) {
  OracleSet o;
  o.beta = [](Element) { return 1; };
  const Structure lying("lying", prop33a_f, o);
  EXPECT_THROW(preimages(lying, 5, 100), OracleViolation);
}

TEST(Preimages, ThreePreimagesIsNotAStructure) {
  const Structure bad("bad", [](Element x) { return x < 3 ? Element{0} : x; });
  EXPECT_THROW(preimages(bad, 0, 10), StructureViolation);
}

TEST(Preimages, SafeBoundFindsEverything) {
  const auto a = structure_prop33A();
  const Element n = 300;
  for (Element x = 0; x <= n; ++x) {
    EXPECT_EQ(as_set(preimages(a, x, 2 * n + 2).found), as_set(preimages(a, x, 10 * n).found)) << x;
  }
}

TEST(Branching, Examples) {
  const auto a = structure_prop33A();
  EXPECT_EQ(branching(a, 1, 10), Branching::Two);
  EXPECT_EQ(branching(a, 0, 10), Branching::One);
  const auto bare = without_oracles(a);
  EXPECT_EQ(branching(bare, 3, 100), Branching::Unresolved);
  EXPECT_EQ(branching(bare, 5, 100), Branching::Two);
}

TEST(DetectCycle, Examples) {
  const auto a = structure_prop33A();
  auto c = detect_cycle(a, 8, 10);
  ASSERT_TRUE(c.found);
  EXPECT_EQ(c.length, 1u);
  EXPECT_EQ(c.cyclic, std::vector<Element>{1});
  c = detect_cycle(a, 0, 1);
  ASSERT_TRUE(c.found);
  EXPECT_EQ(c.cyclic, std::vector<Element>{0});
  c = detect_cycle(shift_chain(), 5, 50);
  EXPECT_FALSE(c.found);
  EXPECT_THROW(detect_cycle(a, 0, 0), InvalidArgument);
}

TEST(DetectCycle, AgreesWithStoredHistory) {
  const AssembledStructure mixed({{Shape::chain(), Shape::empty(), Shape::full()},
                                  {Shape::fork(Shape::chain(), Shape::full())},
                                  {Shape::empty(), Shape::empty(), Shape::chain()}});
  const auto pi = Relabeling::random(120, 7);
  const std::vector<Structure> corpus{structure_prop33A(), structure_zchain(), shift_chain(),
                                      conjugate(mixed.structure(), pi, false)};
  for (const auto& s : corpus) {
    for (Element x = 0; x <= 500; ++x) {
      const auto got = detect_cycle(s, x, 1000);
      const auto want = fixtures::naive_cycle([&](Element y) { return s.apply(y); }, x, 1000);
      ASSERT_EQ(got.found, want.found) << s.label() << " x=" << x;
      if (!want.found) continue;
      EXPECT_EQ(got.length, want.length) << s.label() << " x=" << x;
      EXPECT_EQ(got.entry_steps, want.entry) << s.label() << " x=" << x;
      ASSERT_EQ(got.cyclic.size(), got.length);
      EXPECT_EQ(got.cyclic.front(), *std::min_element(got.cyclic.begin(), got.cyclic.end()));
      for (std::size_t i = 0; i < got.cyclic.size(); ++i) {
        EXPECT_EQ(s.apply(got.cyclic[i]), got.cyclic[(i + 1) % got.cyclic.size()]);
      }
    }
  }
}

TEST(TreeSlice, ChainsOffTheClosedForm) {
  const auto a = structure_prop33A();
  auto t = tree_slice(a, 2, 2, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{2}, {4}, {8}}));
  EXPECT_FALSE(t.exclusive);
  EXPECT_TRUE(t.is_tree());
  t = tree_slice(a, 6, 2, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{6}, {12}, {24}}));
  t = tree_slice(a, 77, 0, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{77}}));
}

TEST(TreeSlice, CyclicRootIsFlagged) {
  const auto a = structure_prop33A();
  const auto t = tree_slice(a, 1, 3, 100);
  EXPECT_TRUE(t.cyclic_root);
  EXPECT_FALSE(t.is_tree());
  EXPECT_EQ(as_set(t.levels.at(1)), (std::set<Element>{1, 2}));
}

TEST(TreeSlice, LevelCoherence) {
  const AssembledStructure mixed({{Shape::fork(Shape::chain(), Shape::full()), Shape::full()},
                                  {Shape::chain()}});
  const auto s = conjugate(mixed.structure(), Relabeling::random(200, 3), true);
  for (Element root = 0; root < 60; ++root) {
    const auto t = tree_slice(s, root, 4, 3000);
    for (std::size_t m = 0; m + 1 < t.levels.size(); ++m) {
      const std::set<Element> up(t.levels[m].begin(), t.levels[m].end());
      for (Element y : t.levels[m + 1]) EXPECT_TRUE(up.count(s.apply(y))) << root << " " << y;
    }
  }
}

TEST(TreeSlice, MatchesNaiveLevelsOnTrees) {
  const AssembledStructure mixed({{Shape::fork(Shape::chain(), Shape::full())}});
  const auto s = mixed.structure();
  for (Element root : mixed.fork_nodes()) {
    const auto t = tree_slice(s, root, 3, 400);
    const auto want = fixtures::naive_levels(s, root, 3, 400);
    for (std::size_t d = 0; d <= 3; ++d) EXPECT_EQ(as_set(t.levels[d]), as_set(want[d]));
  }
}

TEST(ExtreeSlice, Examples) {
  const auto a = structure_prop33A();
  auto t = extree_slice(a, 1, 1, 3, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{1}, {2}, {4}, {8}}));
  EXPECT_TRUE(t.exclusive);
  t = extree_slice(a, 3, 1, 2, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{3}, {}, {}}));
  t = extree_slice(a, 0, 1, 1, 100);
  EXPECT_EQ(t.levels, (std::vector<std::vector<Element>>{{0}, {}}));
  EXPECT_THROW(extree_slice(a, 2, 1, 1, 100), NotCyclic);
}

TEST(ExtreeSlice, ExcludesTheRestOfTheCycle) {
  const AssembledStructure two({{Shape::chain(), Shape::full()}});
  const auto s = two.structure();
  const auto t = extree_slice(s, 0, 2, 3, 500);
  for (const auto& lv : t.levels) {
    for (Element y : lv) EXPECT_NE(y, 1u);
  }
  EXPECT_EQ(t.levels[1].size(), 1u);
  EXPECT_EQ(t.levels[3].size(), 1u);
  EXPECT_TRUE(t.is_tree());
}

TEST(OrbitSample, Examples) {
  const auto a = structure_prop33A();
  auto o = orbit_sample(a, 4, 5, 100);
  for (Element e : {1u, 2u, 4u, 8u}) EXPECT_TRUE(o.count(e)) << e;
  EXPECT_EQ(orbit_sample(a, 7, 0, 0), (std::set<Element>{7}));
  o = orbit_sample(a, 9, 3, 100);
  for (Element e : {9u, 10u, 20u, 40u}) EXPECT_TRUE(o.count(e)) << e;
}

TEST(RegionReport, Examples) {
  const auto a = structure_prop33A();
  const auto r = region_report(a, 13, 100);
  EXPECT_EQ(r.split_hairs, (std::vector<Element>{1, 5, 9, 13}));
  EXPECT_EQ(r.hairs, (std::vector<Element>{0, 2, 3, 4, 6, 7, 8, 10, 11, 12}));
  EXPECT_TRUE(r.unconfirmed.empty());
}

TEST(RegionReport, BetaPattern) {
  const auto a = structure_prop33A();
  const auto r = region_report(a, 1000, 2002);
  const std::set<Element> split(r.split_hairs.begin(), r.split_hairs.end());
  for (Element x = 0; x <= 1000; ++x) EXPECT_EQ(split.count(x) == 1, x % 4 == 1) << x;
}

TEST(RegionReport, ZeroBoundWithoutOracle) {
  const auto a = without_oracles(structure_prop33A());
  const auto r = region_report(a, 10, 0);
  EXPECT_TRUE(r.hairs.empty());
  EXPECT_TRUE(r.split_hairs.empty());
  EXPECT_EQ(r.unconfirmed.size(), 11u);
}

TEST(ZChain, HasNoCycleAndUnitBranching) {
  const auto z = structure_zchain();
  for (Element x = 2; x < 50; ++x) EXPECT_FALSE(detect_cycle(z, x, 200).found);
  for (Element x = 0; x < 100; ++x) EXPECT_EQ(preimages(z, x, 400).found.size(), 1u) << x;
}
