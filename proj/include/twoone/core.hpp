#pragma once

// Bounded exploration of (2,1):1 structures: preimage search, branching,
// cycle detection, tree and exclusive-tree slices, orbit samples and region
// classification. Every search takes an explicit bound and reports whether
// its answer is confirmed; nothing here claims more than it has seen.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "twoone/error.hpp"
#include "twoone/structure.hpp"

namespace twoone {

inline Element apply(const Structure& s, Element x) { return s.apply(x); }

inline Element iterate(const Structure& s, Element x, std::uint64_t n) {
  return s.iterate(x, n);
}

struct PreimageResult {
  std::vector<Element> found;  // ascending
  bool complete = false;       // confirmed by the branching oracle
};

/// Every y <= bound with f(y) == x. `complete` is only ever set when a
/// branching oracle is present and the scan found exactly that many.
inline PreimageResult preimages(const Structure& s, Element x, Element bound) {
  PreimageResult r;
  r.found = s.preimages_upto(x, bound);
  if (r.found.size() > 2) {
    throw StructureViolation(s.label() + ": " + std::to_string(r.found.size()) +
                             " preimages of " + std::to_string(x));
  }
  if (s.has_beta()) {
    const auto b = static_cast<std::size_t>(s.oracle_beta(x));
    if (r.found.size() > b) {
      throw OracleViolation(s.label() + ": found " + std::to_string(r.found.size()) +
                            " preimages of " + std::to_string(x) +
                            " but branching oracle says " + std::to_string(b));
    }
    r.complete = r.found.size() == b;
  }
  return r;
}

enum class Branching { Unresolved = 0, One = 1, Two = 2 };

inline const char* to_string(Branching b) {
  switch (b) {
    case Branching::One: return "1";
    case Branching::Two: return "2";
    case Branching::Unresolved: return "unresolved";
  }
  return "?";
}

/// Oracle value when a branching oracle exists (after checking the scan does
/// not contradict it); otherwise Two if two preimages were found, else
/// Unresolved. A single preimage never proves the count is one.
inline Branching branching(const Structure& s, Element x, Element bound) {
  const PreimageResult p = preimages(s, x, bound);
  if (s.has_beta()) return s.oracle_beta(x) == 2 ? Branching::Two : Branching::One;
  return p.found.size() == 2 ? Branching::Two : Branching::Unresolved;
}

struct CycleInfo {
  bool found = false;
  std::uint64_t length = 0;       // K
  std::vector<Element> cyclic;    // c_1..c_K, c_1 least, f(c_r) = c_{r+1}
  std::uint64_t entry_steps = 0;  // iterations from the probe to the cycle
  std::uint64_t step_cap = 0;
};

/// Brent cycle detection on the forward orbit of x. Reports a cycle iff
/// f^m(x) = f^n(x) for some m < n <= step_cap; otherwise the verdict is
/// "unresolved up to step_cap", never "no cycle".
inline CycleInfo detect_cycle(const Structure& s, Element x, std::uint64_t step_cap) {
  if (step_cap < 1) throw InvalidArgument("detect_cycle: step cap must be >= 1");
  CycleInfo info;
  info.step_cap = step_cap;

  // Brent needs at most ~4(mu + lambda) evaluations once mu + lambda <= cap.
  const std::uint64_t limit =
      step_cap > (std::numeric_limits<std::uint64_t>::max() - 8) / 4 ? std::numeric_limits<std::uint64_t>::max()
                                                                    : 4 * step_cap + 8;
  std::uint64_t power = 1, lambda = 1, steps = 1;
  Element tortoise = x;
  Element hare = s.apply(x);
  while (tortoise != hare) {
    if (steps >= limit) return info;
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = s.apply(hare);
    ++lambda;
    ++steps;
  }

  std::uint64_t mu = 0;
  tortoise = hare = x;
  for (std::uint64_t i = 0; i < lambda; ++i) hare = s.apply(hare);
  while (tortoise != hare) {
    tortoise = s.apply(tortoise);
    hare = s.apply(hare);
    ++mu;
  }
  if (mu + lambda > step_cap) return info;

  info.found = true;
  info.length = lambda;
  info.entry_steps = mu;
  info.cyclic.reserve(lambda);
  Element c = tortoise;
  for (std::uint64_t i = 0; i < lambda; ++i) {
    info.cyclic.push_back(c);
    c = s.apply(c);
  }
  std::rotate(info.cyclic.begin(),
              std::min_element(info.cyclic.begin(), info.cyclic.end()),
              info.cyclic.end());
  return info;
}

/// Levels 0..depth of the tree (or exclusive tree) above a root.
///
/// levels[m] holds the elements a found with f^m(a) = root, ascending.
/// `edges` are (child, parent) pairs. When the root lies on a cycle the
/// walk re-enters the cycle, elements repeat across levels and
/// `cyclic_root` is set; such a slice is not a tree.
struct TreeSlice {
  Element root = 0;
  std::size_t depth = 0;
  std::vector<std::vector<Element>> levels;
  std::vector<std::pair<Element, Element>> edges;
  bool exclusive = false;
  bool cyclic_root = false;
  bool complete = false;  // every preimage set confirmed by an oracle
  Element search_bound = 0;

  bool is_tree() const { return !cyclic_root; }

  std::size_t node_count() const {
    std::size_t n = 0;
    for (const auto& l : levels) n += l.size();
    return n;
  }

  /// Children of `parent` within level `level + 1`.
  std::vector<Element> children(std::size_t level, Element parent) const {
    std::vector<Element> out;
    if (level + 1 >= levels.size()) return out;
    const auto& next = levels[level + 1];
    for (const auto& [c, p] : edges) {
      if (p == parent && std::binary_search(next.begin(), next.end(), c)) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// Grows a TreeSlice one level at a time, so callers that search for the
/// first level with some property do not rebuild from scratch.
class SliceGrower {
 public:
  SliceGrower(const Structure& s, Element root, Element bound,
              std::vector<Element> excluded = {}, bool exclusive = false)
      : s_(s), excluded_(std::move(excluded)) {
    std::sort(excluded_.begin(), excluded_.end());
    slice_.root = root;
    slice_.depth = 0;
    slice_.levels.push_back({root});
    slice_.exclusive = exclusive;
    slice_.complete = true;
    slice_.search_bound = bound;
    seen_.insert(root);
  }

  void grow() {
    std::vector<Element> next;
    for (Element e : slice_.levels.back()) {
      const PreimageResult p = preimages(s_, e, slice_.search_bound);
      if (!p.complete) slice_.complete = false;
      for (Element a : p.found) {
        if (std::binary_search(excluded_.begin(), excluded_.end(), a)) continue;
        if (!seen_.insert(a).second) slice_.cyclic_root = true;
        next.push_back(a);
        edge_set_.insert({a, e});
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    slice_.levels.push_back(std::move(next));
    slice_.depth = slice_.levels.size() - 1;
    slice_.edges.assign(edge_set_.begin(), edge_set_.end());
  }

  void grow_to(std::size_t depth) {
    while (slice_.depth < depth) grow();
  }

  const TreeSlice& slice() const { return slice_; }

 private:
  const Structure& s_;
  std::vector<Element> excluded_;
  TreeSlice slice_;
  std::unordered_set<Element> seen_;
  std::set<std::pair<Element, Element>> edge_set_;
};

inline TreeSlice tree_slice(const Structure& s, Element x, std::size_t depth, Element bound) {
  SliceGrower g(s, x, bound);
  g.grow_to(depth);
  return g.slice();
}

/// The elements f^0(c)..f^{K-1}(c); throws NotCyclic unless f^K(c) = c.
inline std::vector<Element> cycle_through(const Structure& s, Element c, std::uint64_t k) {
  if (k < 1 || s.iterate(c, k) != c) {
    throw NotCyclic(s.label() + ": " + std::to_string(c) + " is not on a cycle of length " +
                    std::to_string(k));
  }
  std::vector<Element> cyc;
  Element e = c;
  for (std::uint64_t i = 0; i < k; ++i) {
    cyc.push_back(e);
    e = s.apply(e);
  }
  return cyc;
}

/// Exclusive tree of a cyclic element: predecessors whose path to c avoids
/// the cycle.
inline TreeSlice extree_slice(const Structure& s, Element c, std::uint64_t k,
                              std::size_t depth, Element bound) {
  SliceGrower g(s, c, bound, cycle_through(s, c, k), true);
  g.grow_to(depth);
  return g.slice();
}

/// Finite under-approximation of the orbit of x: x, its first
/// `forward_steps` images, and everything reachable backwards from those
/// through preimages <= back_bound. A back_bound of 0 disables the backward
/// search.
inline std::set<Element> orbit_sample(const Structure& s, Element x,
                                      std::uint64_t forward_steps, Element back_bound) {
  std::set<Element> out{x};
  Element cur = x;
  for (std::uint64_t i = 0; i < forward_steps; ++i) {
    cur = s.apply(cur);
    if (!out.insert(cur).second) break;
  }
  if (back_bound == 0) return out;
  std::vector<Element> todo(out.begin(), out.end());
  while (!todo.empty()) {
    const Element e = todo.back();
    todo.pop_back();
    for (Element a : s.preimages_upto(e, back_bound)) {
      if (out.insert(a).second) todo.push_back(a);
    }
  }
  return out;
}

struct RegionReport {
  Element region_end = 0;  // region is {0..region_end}
  Element bound = 0;
  std::vector<Element> hairs;        // confirmed one preimage
  std::vector<Element> split_hairs;  // confirmed two preimages
  std::vector<Element> unconfirmed;
};

/// Classifies {0..n} by preimage count among {0..bound}. A bound of at
/// least 2n+2 is usually what closed-form structures need.
inline RegionReport region_report(const Structure& s, Element n, Element bound) {
  RegionReport r;
  r.region_end = n;
  r.bound = bound;
  for (Element x = 0; x <= n; ++x) {
    const PreimageResult p = preimages(s, x, bound);
    if (s.has_beta()) {
      if (!p.complete) {
        r.unconfirmed.push_back(x);
      } else if (p.found.size() == 2) {
        r.split_hairs.push_back(x);
      } else {
        r.hairs.push_back(x);
      }
    } else if (p.found.size() == 2) {
      r.split_hairs.push_back(x);
    } else {
      r.unconfirmed.push_back(x);
    }
  }
  return r;
}

}  // namespace twoone
