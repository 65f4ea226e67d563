#pragma once

// Isomorphism of finite rooted trees with at most two (unordered) children
// per node: AHU canonical codes, an exhaustive matcher used as a test
// oracle, and the separating-level search over truncated trees.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "twoone/core.hpp"
#include "twoone/error.hpp"

namespace twoone {

/// Parenthesis encoding of an unordered rooted tree: 1 opens a node, 0
/// closes it, children appear in lexicographic order of their own codes.
struct CanonCode {
  std::vector<std::uint8_t> symbols;

  auto operator<=>(const CanonCode&) const = default;

  std::string to_string() const {
    std::string s;
    s.reserve(symbols.size());
    for (auto c : symbols) s.push_back(c ? '(' : ')');
    return s;
  }
};

namespace detail {

// Codes of the slice unrolled into a tree: each (level, element) occurrence
// is its own node. For a genuine tree this is the tree itself.
inline CanonCode unrolled_code(const TreeSlice& t) {
  std::unordered_map<Element, std::vector<Element>> kids;
  for (const auto& [c, p] : t.edges) kids[p].push_back(c);

  std::unordered_map<Element, CanonCode> below;  // codes of level m+1
  for (std::size_t m = t.levels.size(); m-- > 0;) {
    std::unordered_map<Element, CanonCode> here;
    for (Element e : t.levels[m]) {
      std::vector<const CanonCode*> parts;
      if (m + 1 < t.levels.size()) {
        if (auto it = kids.find(e); it != kids.end()) {
          for (Element c : it->second) {
            if (auto jt = below.find(c); jt != below.end()) parts.push_back(&jt->second);
          }
        }
      }
      std::sort(parts.begin(), parts.end(),
                [](const CanonCode* a, const CanonCode* b) { return a->symbols < b->symbols; });
      CanonCode code;
      code.symbols.push_back(1);
      for (const CanonCode* p : parts)
        code.symbols.insert(code.symbols.end(), p->symbols.begin(), p->symbols.end());
      code.symbols.push_back(0);
      here.emplace(e, std::move(code));
    }
    below = std::move(here);
  }
  return below.at(t.root);
}

inline void require_tree(const TreeSlice& t) {
  if (t.cyclic_root) {
    throw NotATree("slice rooted at " + std::to_string(t.root) +
                   " re-enters a cycle and is not a tree");
  }
}

}  // namespace detail

inline CanonCode canonical_code(const TreeSlice& t) {
  detail::require_tree(t);
  return detail::unrolled_code(t);
}

inline bool is_isomorphic(const TreeSlice& a, const TreeSlice& b) {
  if (a.depth != b.depth) {
    throw DepthMismatch("truncation depths differ: " + std::to_string(a.depth) + " vs " +
                        std::to_string(b.depth));
  }
  return canonical_code(a) == canonical_code(b);
}

/// Exhaustive root-preserving matcher: tries every pairing of children at
/// every node. Limited to 12 nodes per tree.
inline bool brute_force_isomorphic(const TreeSlice& a, const TreeSlice& b) {
  detail::require_tree(a);
  detail::require_tree(b);
  constexpr std::size_t kMaxNodes = 12;
  if (a.node_count() > kMaxNodes || b.node_count() > kMaxNodes) {
    throw TooLarge("brute-force isomorphism is limited to 12 nodes per tree");
  }
  if (a.node_count() != b.node_count()) return false;

  struct Side {
    const TreeSlice& t;
    std::unordered_map<Element, std::vector<Element>> kids;
    explicit Side(const TreeSlice& s) : t(s) {
      for (const auto& [c, p] : s.edges) kids[p].push_back(c);
    }
    std::vector<Element> children(Element e) const {
      auto it = kids.find(e);
      return it == kids.end() ? std::vector<Element>{} : it->second;
    }
  };
  const Side sa(a), sb(b);

  auto match = [&](auto&& self, Element u, Element v) -> bool {
    const auto cu = sa.children(u);
    auto cv = sb.children(v);
    if (cu.size() != cv.size()) return false;
    std::vector<std::size_t> perm(cv.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
      bool ok = true;
      for (std::size_t i = 0; i < cu.size() && ok; ++i) ok = self(self, cu[i], cv[perm[i]]);
      if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };
  return match(match, a.root, b.root);
}

/// Builds a slice from a parent array (parent[0] is ignored; node 0 is the
/// root, parent[i] < i otherwise), padded with empty levels up to `depth`.
inline TreeSlice slice_from_parents(const std::vector<int>& parent, std::size_t depth) {
  TreeSlice t;
  t.root = 0;
  t.complete = true;
  std::vector<std::size_t> level(parent.size(), 0);
  std::size_t max_level = 0;
  for (std::size_t i = 1; i < parent.size(); ++i) {
    const auto p = static_cast<std::size_t>(parent[i]);
    if (p >= i) throw InvalidArgument("slice_from_parents: parent must precede child");
    level[i] = level[p] + 1;
    max_level = std::max(max_level, level[i]);
    t.edges.emplace_back(i, p);
  }
  if (parent.empty()) throw InvalidArgument("slice_from_parents: empty tree");
  t.depth = std::max(depth, max_level);
  t.levels.assign(t.depth + 1, {});
  for (std::size_t i = 0; i < parent.size(); ++i) t.levels[level[i]].push_back(i);
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

/// Isomorphism of two truncations of equal depth. A cyclic-root slice is
/// never isomorphic to a tree; two cyclic-root slices are compared through
/// their unrolled codes.
inline bool truncations_isomorphic(const TreeSlice& a, const TreeSlice& b) {
  if (a.depth != b.depth) {
    throw DepthMismatch("truncation depths differ: " + std::to_string(a.depth) + " vs " +
                        std::to_string(b.depth));
  }
  if (a.cyclic_root != b.cyclic_root) return false;
  return detail::unrolled_code(a) == detail::unrolled_code(b);
}

/// Least n <= level_cap at which Tree(x1, n) and Tree(x2, n) differ;
/// nullopt when none does up to the cap (not a proof of isomorphism).
/// With a branching oracle a difference only counts while both slices are
/// oracle-complete; once the search bound truncates either one the result
/// is nullopt as well.
inline std::optional<std::size_t> separating_level(const Structure& s, Element x1, Element x2,
                                                   std::size_t level_cap, Element bound) {
  if (x1 == x2) throw InvalidArgument("separating_level: x1 and x2 must differ");
  SliceGrower g1(s, x1, bound), g2(s, x2, bound);
  for (std::size_t n = 0;; ++n) {
    if (s.has_beta() && !(g1.slice().complete && g2.slice().complete)) return std::nullopt;
    if (!truncations_isomorphic(g1.slice(), g2.slice())) return n;
    if (n == level_cap) return std::nullopt;
    g1.grow();
    g2.grow();
  }
}

}  // namespace twoone
