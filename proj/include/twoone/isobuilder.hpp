#pragma once

// Stage-by-stage isomorphism construction between trees, exclusive trees
// and whole structures made of finitely many k-cycles, plus a verifier for
// the resulting finite partial maps.
//
// At stage s+1 every element x on level s of the source tree, already
// mapped to y, gets its preimages mapped onto those of y:
//   beta(x) = 1            the unique preimages are paired;
//   beta(x) = 2, iso(x)=1  min -> min and max -> max;
//   beta(x) = 2, iso(x)=0  the branches are told apart at their first
//                          separating level and paired by isomorphism type.
// Only the source structure needs oracles; the target's preimages are found
// by bounded search, using the source's branching value as the count.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twoone/core.hpp"
#include "twoone/error.hpp"
#include "twoone/treeiso.hpp"

namespace twoone {

struct IsoConfig {
  std::size_t stage_budget = 8;
  std::size_t separating_level_cap = 16;
  Element search_bound = 4096;
  // Structure-level assembly only.
  Element element_bound = 256;  // cycles are looked for among least elements <= this
  std::size_t match_depth = 3;
  std::size_t match_retries = 4;
};

/// A finite partial map between two structures, with the stage at which
/// each pair was fixed. Pairs are never rewritten.
struct PartialIso {
  std::map<Element, Element> pairs;
  std::map<Element, std::size_t> stage_fixed;
  std::map<Element, bool> roots;  // root of each tree piece -> root is cyclic
  std::size_t stages_run = 0;
  bool complete = true;

  bool contains(Element x) const { return pairs.count(x) != 0; }
  Element at(Element x) const { return pairs.at(x); }

  void fix(Element x, Element y, std::size_t stage) {
    if (auto it = pairs.find(x); it != pairs.end()) {
      if (it->second != y) {
        throw InvalidArgument("attempt to redefine h(" + std::to_string(x) + ")");
      }
      return;
    }
    pairs.emplace(x, y);
    stage_fixed.emplace(x, stage);
  }

  /// Union with a piece defined on a disjoint part of the domain.
  void merge(const PartialIso& other) {
    for (const auto& [x, y] : other.pairs) fix(x, y, other.stage_fixed.at(x));
    for (const auto& [r, c] : other.roots) roots[r] = c;
    stages_run = std::max(stages_run, other.stages_run);
    complete = complete && other.complete;
  }
};

namespace detail {

class TreeIsoEngine {
 public:
  TreeIsoEngine(const Structure& a, const Structure& b, const IsoConfig& cfg, PartialIso& h)
      : a_(a), b_(b), cfg_(cfg), h_(h) {}

  /// Runs stages first_stage..stage_budget starting from `frontier` (already
  /// mapped elements of the level just completed).
  void run(std::vector<Element> frontier, std::size_t first_stage) {
    for (std::size_t stage = first_stage; stage <= cfg_.stage_budget; ++stage) {
      if (frontier.empty()) break;
      std::sort(frontier.begin(), frontier.end());
      std::vector<Element> next;
      for (Element x : frontier) extend(x, stage, next);
      h_.stages_run = stage;
      frontier = std::move(next);
    }
  }

  /// Preimages of y in the target, given the source's branching value.
  /// Returns nullopt when the search bound is too small to find them all.
  std::optional<std::vector<Element>> target_preimages(Element y, int expected) {
    std::vector<Element> found = preimages(b_, y, cfg_.search_bound).found;
    if (b_.has_beta()) {
      const int bb = b_.oracle_beta(y);
      if (bb != expected) {
        throw OracleMismatch("branching disagrees at target element " + std::to_string(y) +
                             ": expected " + std::to_string(expected) + ", target has " +
                             std::to_string(bb));
      }
    }
    if (found.size() > static_cast<std::size_t>(expected)) {
      throw OracleMismatch("target element " + std::to_string(y) + " has " +
                           std::to_string(found.size()) + " preimages, expected " +
                           std::to_string(expected));
    }
    if (found.size() < static_cast<std::size_t>(expected)) return std::nullopt;
    return found;
  }

 private:
  void extend(Element x, std::size_t stage, std::vector<Element>& next) {
    const Element y = h_.at(x);
    const int beta = a_.oracle_beta(x);
    const PreimageResult pa = preimages(a_, x, cfg_.search_bound);
    if (pa.found.size() < static_cast<std::size_t>(beta)) {
      h_.complete = false;
      return;
    }
    const auto pb = target_preimages(y, beta);
    if (!pb) {
      h_.complete = false;
      return;
    }
    const auto& xs = pa.found;
    const auto& ys = *pb;

    if (beta == 1) {
      h_.fix(xs[0], ys[0], stage);
    } else if (a_.oracle_iso(x) == 1) {
      h_.fix(xs[0], ys[0], stage);
      h_.fix(xs[1], ys[1], stage);
    } else {
      const bool straight = separate(x, xs[0], xs[1], ys[0], ys[1]);
      h_.fix(xs[0], straight ? ys[0] : ys[1], stage);
      h_.fix(xs[1], straight ? ys[1] : ys[0], stage);
    }
    next.insert(next.end(), xs.begin(), xs.end());
  }

  // True when x1 -> y1, x2 -> y2; false for the crossed pairing.
  bool separate(Element x, Element x1, Element x2, Element y1, Element y2) {
    const auto n0 = separating_level(a_, x1, x2, cfg_.separating_level_cap, cfg_.search_bound);
    if (!n0) {
      throw SeparationFailure("no level <= " + std::to_string(cfg_.separating_level_cap) +
                              " separates the branches of " + std::to_string(x));
    }
    SliceGrower ga1(a_, x1, cfg_.search_bound), ga2(a_, x2, cfg_.search_bound);
    SliceGrower gb1(b_, y1, cfg_.search_bound), gb2(b_, y2, cfg_.search_bound);
    for (std::size_t n = *n0; n <= cfg_.separating_level_cap; ++n) {
      ga1.grow_to(n);
      ga2.grow_to(n);
      gb1.grow_to(n);
      gb2.grow_to(n);
      const bool m1 = truncations_isomorphic(ga1.slice(), gb1.slice());
      const bool m2 = truncations_isomorphic(ga1.slice(), gb2.slice());
      if (m1 && m2) continue;  // too shallow to tell the target branches apart
      if (!m1 && !m2) {
        throw OracleMismatch("branch " + std::to_string(x1) + " of " + std::to_string(x) +
                             " matches neither target branch at level " + std::to_string(n));
      }
      const auto& partner = m1 ? gb2.slice() : gb1.slice();
      if (!truncations_isomorphic(ga2.slice(), partner)) {
        throw OracleMismatch("branch " + std::to_string(x2) + " of " + std::to_string(x) +
                             " does not match the remaining target branch at level " +
                             std::to_string(n));
      }
      return m1;
    }
    throw SeparationFailure("target branches of " + std::to_string(h_.at(x)) +
                            " stay indistinguishable up to level " +
                            std::to_string(cfg_.separating_level_cap));
  }

  const Structure& a_;
  const Structure& b_;
  const IsoConfig& cfg_;
  PartialIso& h_;
};

inline void require_source_oracles(const Structure& a) {
  if (!a.has_beta() || !a.has_iso()) {
    throw MissingOracle(a.label() + ": isomorphism building needs branching and branch "
                                    "isomorphism oracles on the source structure");
  }
}

inline void require_non_cyclic(const Structure& s, Element x, Element cap) {
  const CycleInfo ci = detect_cycle(s, x, std::max<Element>(cap, 1));
  if (ci.found && ci.entry_steps == 0) {
    throw InvalidArgument(s.label() + ": root " + std::to_string(x) + " lies on a " +
                          std::to_string(ci.length) + "-cycle");
  }
}

}  // namespace detail

/// Isomorphism from Tree_A(a0) to Tree_B(b0), built for cfg.stage_budget
/// stages (levels).
inline PartialIso build_tree_iso(const Structure& a, Element a0, const Structure& b, Element b0,
                                 const IsoConfig& cfg) {
  detail::require_source_oracles(a);
  detail::require_non_cyclic(a, a0, cfg.search_bound);
  detail::require_non_cyclic(b, b0, cfg.search_bound);
  PartialIso h;
  h.fix(a0, b0, 0);
  h.roots[a0] = false;
  detail::TreeIsoEngine(a, b, cfg, h).run({a0}, 1);
  return h;
}

/// Isomorphism from exTree_A(c1) to exTree_B(d1) for cyclic c1, d1 on
/// cycles of length k.
inline PartialIso build_extree_iso(const Structure& a, Element c1, std::uint64_t k,
                                   const Structure& b, Element d1, const IsoConfig& cfg) {
  detail::require_source_oracles(a);
  const auto cyc_a = cycle_through(a, c1, k);
  const auto cyc_b = cycle_through(b, d1, k);

  PartialIso h;
  h.fix(c1, d1, 0);
  h.roots[c1] = true;

  const int expected = a.oracle_beta(c1) - 1;  // non-cyclic preimages of c1
  std::vector<Element> xs;
  for (Element v : preimages(a, c1, cfg.search_bound).found) {
    if (std::find(cyc_a.begin(), cyc_a.end(), v) == cyc_a.end()) xs.push_back(v);
  }
  std::vector<Element> ys;
  for (Element v : preimages(b, d1, cfg.search_bound).found) {
    if (std::find(cyc_b.begin(), cyc_b.end(), v) == cyc_b.end()) ys.push_back(v);
  }
  const int target = b.has_beta() ? b.oracle_beta(d1) - 1 : static_cast<int>(ys.size());
  if ((expected > 0) != (target > 0) || ys.size() > static_cast<std::size_t>(expected)) {
    throw OracleMismatch("exactly one of " + std::to_string(c1) + " and " + std::to_string(d1) +
                         " has a non-cyclic preimage");
  }
  if (cfg.stage_budget == 0) return h;
  h.stages_run = 1;
  if (expected == 0) return h;
  if (xs.empty() || ys.empty()) {
    h.complete = false;
    return h;
  }
  h.fix(xs[0], ys[0], 1);
  detail::TreeIsoEngine(a, b, cfg, h).run({xs[0]}, 2);
  return h;
}

/// Every k-cycle whose least element is <= element_bound, each listed from
/// its least element.
inline std::vector<std::vector<Element>> find_cycles(const Structure& s, std::uint64_t k,
                                                     Element element_bound) {
  std::vector<std::vector<Element>> out;
  if (k == 0) return out;
  for (Element x = 0; x <= element_bound; ++x) {
    std::vector<Element> cyc{x};
    Element e = x;
    bool ok = true;
    for (std::uint64_t j = 1; j <= k && ok; ++j) {
      e = s.apply(e);
      if (j < k) {
        if (e <= x) ok = false;  // returns early or x is not the least element
        else cyc.push_back(e);
      } else {
        ok = e == x;
      }
    }
    if (ok) out.push_back(std::move(cyc));
  }
  return out;
}

struct CyclePairing {
  std::vector<Element> a;  // c_1..c_k
  std::vector<Element> b;  // d_1..d_k, aligned so c_i -> d_i
};

struct CycleMatching {
  std::uint64_t k = 0;
  std::size_t depth = 0;
  std::vector<CyclePairing> pairs;
  std::vector<std::vector<Element>> unmatched_a;
  std::vector<std::vector<Element>> unmatched_b;

  bool complete() const { return unmatched_a.empty() && unmatched_b.empty(); }
};

namespace detail {

inline std::vector<CanonCode> cycle_signature(const Structure& s,
                                              const std::vector<Element>& cyc,
                                              std::size_t depth, Element bound) {
  std::vector<CanonCode> sig;
  for (Element c : cyc) sig.push_back(canonical_code(extree_slice(s, c, cyc.size(), depth, bound)));
  return sig;
}

}  // namespace detail

/// Pairs the k-cycles of A with those of B whose exclusive-tree codes at
/// the given depth agree up to rotation. Leftovers are reported, not thrown.
inline CycleMatching match_cycles(const Structure& a, const Structure& b, std::uint64_t k,
                                  Element element_bound, std::size_t depth,
                                  Element search_bound) {
  CycleMatching m;
  m.k = k;
  m.depth = depth;
  const auto ca = find_cycles(a, k, element_bound);
  const auto cb = find_cycles(b, k, element_bound);
  std::vector<std::vector<CanonCode>> sb;
  for (const auto& c : cb) sb.push_back(detail::cycle_signature(b, c, depth, search_bound));
  std::vector<bool> used(cb.size(), false);

  for (const auto& c : ca) {
    const auto sa = detail::cycle_signature(a, c, depth, search_bound);
    bool matched = false;
    for (std::size_t j = 0; j < cb.size() && !matched; ++j) {
      if (used[j]) continue;
      for (std::size_t r = 0; r < k && !matched; ++r) {
        bool same = true;
        for (std::size_t i = 0; i < k && same; ++i) same = sa[i] == sb[j][(i + r) % k];
        if (!same) continue;
        CyclePairing p;
        p.a = c;
        for (std::size_t i = 0; i < k; ++i) p.b.push_back(cb[j][(i + r) % k]);
        m.pairs.push_back(std::move(p));
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) m.unmatched_a.push_back(c);
  }
  for (std::size_t j = 0; j < cb.size(); ++j) {
    if (!used[j]) m.unmatched_b.push_back(cb[j]);
  }
  return m;
}

/// Union over k in ks of the exclusive-tree isomorphisms of matched
/// k-cycles. A pairing that later proves wrong (OracleMismatch or
/// SeparationFailure) triggers a rematch at twice the depth, up to
/// cfg.match_retries times.
inline PartialIso build_structure_iso(const Structure& a, const Structure& b,
                                      const std::vector<std::uint64_t>& ks,
                                      const IsoConfig& cfg) {
  detail::require_source_oracles(a);
  PartialIso total;
  for (std::uint64_t k : ks) {
    std::size_t depth = std::max<std::size_t>(cfg.match_depth, 1);
    for (std::size_t attempt = 0;; ++attempt) {
      const CycleMatching m = match_cycles(a, b, k, cfg.element_bound, depth, cfg.search_bound);
      if (!m.complete()) {
        throw IncompleteMatching(std::to_string(m.unmatched_a.size()) + " source and " +
                                 std::to_string(m.unmatched_b.size()) + " target " +
                                 std::to_string(k) + "-cycles left unmatched at depth " +
                                 std::to_string(depth));
      }
      try {
        PartialIso hk;
        for (const auto& p : m.pairs) {
          for (std::size_t i = 0; i < p.a.size(); ++i) {
            hk.merge(build_extree_iso(a, p.a[i], k, b, p.b[i], cfg));
          }
        }
        total.merge(hk);
        break;
      } catch (const OracleMismatch&) {
        if (attempt >= cfg.match_retries) throw;
      } catch (const SeparationFailure&) {
        if (attempt >= cfg.match_retries) throw;
      }
      depth *= 2;
    }
  }
  return total;
}

struct Violation {
  std::string kind;  // injectivity | commutation | beta | level
  Element x = 0;
  std::string detail;
};

struct VerifyReport {
  std::size_t pairs_checked = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks a partial isomorphism: injectivity, commutation with f and g,
/// agreement of branching on interior points (fixed before the last stage)
/// and preservation of levels below each root.
inline VerifyReport verify_partial_iso(const Structure& a, const Structure& b, const PartialIso& h,
                                       Element bound) {
  VerifyReport rep;
  rep.pairs_checked = h.pairs.size();

  std::map<Element, Element> inverse;
  for (const auto& [x, y] : h.pairs) {
    auto [it, fresh] = inverse.emplace(y, x);
    if (!fresh) {
      rep.violations.push_back({"injectivity", x,
                                "shares image " + std::to_string(y) + " with " +
                                    std::to_string(it->second)});
    }
  }

  std::map<Element, std::size_t> domain_children;
  for (const auto& [x, y] : h.pairs) {
    const Element fx = a.apply(x);
    if (h.contains(fx) && fx != x) ++domain_children[fx];
    const auto root = h.roots.find(x);
    const bool tree_root = root != h.roots.end() && !root->second;
    if (!tree_root && h.contains(fx) && b.apply(y) != h.at(fx)) {
      rep.violations.push_back({"commutation", x,
                                "g(h(x)) = " + std::to_string(b.apply(y)) + " but h(f(x)) = " +
                                    std::to_string(h.at(fx))});
    }
  }

  for (const auto& [x, y] : h.pairs) {
    if (h.stage_fixed.at(x) >= h.stages_run) continue;
    const Branching ba = branching(a, x, bound);
    const Branching bb = branching(b, y, bound);
    if (ba != Branching::Unresolved && bb != Branching::Unresolved && ba != bb) {
      rep.violations.push_back({"beta", x,
                                std::string("branching ") + to_string(ba) + " vs " +
                                    to_string(bb) + " at image " + std::to_string(y)});
      continue;
    }
    const auto root = h.roots.find(x);
    if (h.complete && ba != Branching::Unresolved && (root == h.roots.end() || !root->second)) {
      const std::size_t kids = domain_children.count(x) ? domain_children[x] : 0;
      if (kids != static_cast<std::size_t>(ba)) {
        rep.violations.push_back({"beta", x,
                                  "interior point has " + std::to_string(kids) +
                                      " mapped preimages, branching " + to_string(ba)});
      }
    }
  }

  for (const auto& [x, y] : h.pairs) {
    Element e = x;
    std::size_t level = 0;
    while (!h.roots.count(e) && level <= h.stages_run + 1) {
      e = a.apply(e);
      ++level;
    }
    if (!h.roots.count(e)) {
      rep.violations.push_back({"level", x, "no root within " + std::to_string(level) + " steps"});
      continue;
    }
    if (b.iterate(y, level) != h.at(e)) {
      rep.violations.push_back({"level", x,
                                "image is not at level " + std::to_string(level) + " below " +
                                    std::to_string(h.at(e))});
    }
  }
  return rep;
}

}  // namespace twoone
