#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace twoone;

namespace {

TreeSlice from(const std::vector<int>& parents, std::size_t depth = 0) {
  return slice_from_parents(parents, depth);
}

std::vector<std::vector<int>> corpus_up_to(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::size_t k = 1; k <= n; ++k) {
    for (const auto& t : fixtures::trees_with(k)) out.push_back(fixtures::to_parents(t));
  }
  return out;
}

}  // namespace

TEST(TreeEnumeration, KnownCounts) {
  // Unordered rooted trees with out-degree <= 2 (OEIS A001190, shifted).
  const std::vector<std::size_t> want{1, 1, 2, 3, 6, 11, 23};
  for (std::size_t n = 1; n <= 7; ++n) EXPECT_EQ(fixtures::trees_with(n).size(), want[n - 1]) << n;
}

TEST(CanonicalCode, SmallExamples) {
  EXPECT_EQ(canonical_code(from({-1})).to_string(), "()");
  EXPECT_EQ(canonical_code(from({-1, 0})).to_string(), "(())");
  EXPECT_EQ(canonical_code(from({-1, 0, 0})), canonical_code(from({-1, 0, 0})));
  EXPECT_NE(canonical_code(from({-1, 0, 1})), canonical_code(from({-1, 0, 0})));
}

TEST(CanonicalCode, CyclicRootIsNotATree) {
  const auto t = tree_slice(structure_prop33A(), 1, 2, 100);
  EXPECT_THROW(canonical_code(t), NotATree);
}

TEST(IsIsomorphic, Examples) {
  const auto a = structure_prop33A();
  // two degenerate chains of depth 2
  EXPECT_TRUE(is_isomorphic(extree_slice(a, 1, 1, 2, 100), from({-1, 0, 1}, 2)));
  EXPECT_FALSE(is_isomorphic(extree_slice(a, 1, 1, 1, 100), extree_slice(a, 3, 1, 1, 100)));
  const auto t = from({-1, 0, 0, 1, 2, 2});
  EXPECT_TRUE(is_isomorphic(t, t));
  EXPECT_THROW(is_isomorphic(from({-1, 0}, 1), from({-1, 0}, 2)), DepthMismatch);
}

TEST(BruteForce, Examples) {
  EXPECT_FALSE(brute_force_isomorphic(from({-1}), from({-1, 0})));
  // mirror images
  EXPECT_TRUE(brute_force_isomorphic(from({-1, 0, 0, 1, 3}), from({-1, 0, 0, 2, 3})));
  std::vector<int> big{-1};
  for (int i = 1; i < 13; ++i) big.push_back(i - 1);
  EXPECT_THROW(brute_force_isomorphic(from(big), from(big)), TooLarge);
}

TEST(OracleEquivalence, ExhaustiveUpToSevenNodes) {
  const auto corpus = corpus_up_to(7);
  std::size_t checked = 0;
  for (const auto& p : corpus) {
    for (const auto& q : corpus) {
      // compare at a common depth so is_isomorphic is defined
      const std::size_t d = std::max(from(p).depth, from(q).depth);
      const auto a = from(p, d), b = from(q, d);
      ASSERT_EQ(is_isomorphic(a, b), brute_force_isomorphic(a, b));
      ++checked;
    }
  }
  EXPECT_EQ(checked, corpus.size() * corpus.size());
  // distinct representatives are pairwise non-isomorphic
  std::set<CanonCode> codes;
  for (const auto& p : corpus) codes.insert(canonical_code(from(p)));
  EXPECT_EQ(codes.size(), corpus.size());
}

TEST(CodeStability, RandomRelabelings) {
  std::mt19937_64 rng(2024);
  const auto corpus = corpus_up_to(6);
  for (const auto& p : {corpus[3], corpus[10], corpus.back(),
                        fixtures::to_parents(fixtures::trees_with(7).back())}) {
    const auto want = canonical_code(from(p));
    for (int i = 0; i < 1000; ++i) {
      const auto q = fixtures::shuffled(p, rng);
      ASSERT_EQ(canonical_code(from(q)), want);
    }
  }
}

TEST(SeparatingLevel, CyclicVersusChain) {
  const auto a = structure_prop33A();
  EXPECT_EQ(separating_level(a, 1, 2, 5, 1000), std::optional<std::size_t>(1));
}

TEST(SeparatingLevel, IsomorphicChainsNeverSeparate) {
  const auto a = structure_prop33A();
  EXPECT_EQ(separating_level(a, 2, 6, 4, 1000), std::nullopt);
  EXPECT_THROW(separating_level(a, 2, 2, 4, 1000), InvalidArgument);
}

TEST(SeparatingLevel, ChainVersusFullTree) {
  const AssembledStructure s({{Shape::fork(Shape::chain(), Shape::full())}});
  const auto st = s.structure();
  const Element fork = s.fork_nodes().at(0);
  const auto kids = preimages(st, fork, 100).found;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(separating_level(st, kids[0], kids[1], 3, 1000), std::optional<std::size_t>(1));
}

TEST(SeparatingLevel, IsMinimal) {
  // Against a linear scan over explicitly built truncations.
  const AssembledStructure s({{Shape::fork(Shape::fork(Shape::chain(), Shape::chain()),
                                           Shape::fork(Shape::chain(), Shape::full())),
                               Shape::full()},
                              {Shape::fork(Shape::full(), Shape::chain())}});
  const auto st = s.structure();
  const Element bound = 5000;
  std::vector<Element> roots;
  for (Element x = s.finite_count(); x < s.finite_count() + 12; ++x) roots.push_back(x);
  for (Element x : s.fork_nodes()) roots.push_back(x);
  for (Element x1 : roots) {
    for (Element x2 : roots) {
      if (x1 == x2) continue;
      const auto got = separating_level(st, x1, x2, 5, bound);
      std::optional<std::size_t> want;
      for (std::size_t n = 0; n <= 5 && !want; ++n) {
        if (!is_isomorphic(tree_slice(st, x1, n, bound), tree_slice(st, x2, n, bound))) want = n;
      }
      EXPECT_EQ(got, want) << x1 << " vs " << x2;
    }
  }
}
