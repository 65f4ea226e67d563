#pragma once

// Independent oracles and generators shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "twoone/twoone.hpp"

namespace fixtures {

using twoone::Element;

// Piecewise map coded separately from the library version.
inline Element closed_form_copy(Element x) {
  switch (x % 4) {
    case 0: return x == 0 ? 0 : x >> 1;
    case 2: return x - 1;
    default: return x;
  }
}

/// All unordered rooted trees with exactly n nodes and at most two children
/// per node, one representative each, as parent vectors (parent[i] < i).
/// Built from scratch: a tree is a root plus a multiset of at most two
/// subtrees; representatives are de-duplicated by a sorted nested string.
struct ShapeTree {
  std::vector<ShapeTree> kids;
  std::string key() const {
    std::vector<std::string> ks;
    for (const auto& k : kids) ks.push_back(k.key());
    std::sort(ks.begin(), ks.end());
    std::string s = "[";
    for (const auto& k : ks) s += k;
    return s + "]";
  }
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : kids) n += k.size();
    return n;
  }
  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& k : kids) h = std::max(h, k.height() + 1);
    return h;
  }
};

inline std::vector<ShapeTree> trees_with(std::size_t n) {
  static std::map<std::size_t, std::vector<ShapeTree>> memo;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  std::vector<ShapeTree> out;
  std::set<std::string> seen;
  auto keep = [&](ShapeTree t) {
    if (seen.insert(t.key()).second) out.push_back(std::move(t));
  };
  if (n == 1) {
    keep(ShapeTree{});
  } else {
    for (const auto& a : trees_with(n - 1)) keep(ShapeTree{{a}});
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (const auto& a : trees_with(i)) {
        for (const auto& b : trees_with(n - 1 - i)) keep(ShapeTree{{a, b}});
      }
    }
  }
  memo[n] = out;
  return out;
}

inline std::vector<int> to_parents(const ShapeTree& t) {
  std::vector<int> parent{-1};
  std::function<void(const ShapeTree&, int)> walk = [&](const ShapeTree& node, int at) {
    for (const auto& k : node.kids) {
      parent.push_back(at);
      walk(k, static_cast<int>(parent.size()) - 1);
    }
  };
  walk(t, 0);
  return parent;
}

/// Random relabeling of a parent-vector tree that keeps parent-before-child
/// order: children lists are shuffled and nodes renumbered in BFS order.
template <class Rng>
std::vector<int> shuffled(const std::vector<int>& parent, Rng& rng) {
  const std::size_t n = parent.size();
  std::vector<std::vector<int>> kids(n);
  for (std::size_t i = 1; i < n; ++i) kids[parent[i]].push_back(static_cast<int>(i));
  for (auto& k : kids) std::shuffle(k.begin(), k.end(), rng);
  std::vector<int> order{0}, pos(n, 0), out(n, -1);
  for (std::size_t h = 0; h < order.size(); ++h) {
    for (int c : kids[order[h]]) order.push_back(c);
  }
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<int>(i);
  for (std::size_t i = 1; i < n; ++i) out[pos[i]] = pos[parent[i]];
  return out;
}

/// Cycle detection by recording the full history.
struct NaiveCycle {
  bool found = false;
  std::uint64_t length = 0;
  std::uint64_t entry = 0;
};

inline NaiveCycle naive_cycle(const std::function<Element(Element)>& f, Element x,
                              std::uint64_t cap) {
  std::map<Element, std::uint64_t> seen;
  Element e = x;
  for (std::uint64_t i = 0; i <= cap; ++i) {
    if (auto it = seen.find(e); it != seen.end()) {
      return {true, i - it->second, it->second};
    }
    seen[e] = i;
    e = f(e);
  }
  return {};
}

/// Level-ordered explicit subtree of an element, children found by scanning
/// 0..bound directly on the evaluator.
inline std::vector<std::vector<Element>> naive_levels(const twoone::Structure& s, Element root,
                                                      std::size_t depth, Element bound) {
  std::vector<std::vector<Element>> lv{{root}};
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Element> next;
    for (Element p : lv.back()) {
      for (Element y = 0; y <= bound; ++y) {
        if (y != p && s.apply(y) == p) next.push_back(y);
      }
    }
    std::sort(next.begin(), next.end());
    lv.push_back(next);
  }
  return lv;
}

inline twoone::StepFunction fn(std::uint64_t e, std::map<Element, twoone::Convergence> entries = {},
                               std::optional<twoone::Convergence> fallback = std::nullopt) {
  return twoone::StepFunction{e, std::move(entries), fallback};
}

}  // namespace fixtures
