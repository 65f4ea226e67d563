#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twoone/core.hpp"

namespace twoone {

/// Graphviz rendering of a finite slice. Edges point from child to parent;
/// edges leaving a cyclic element are solid and bold, tree edges dashed; the
/// root is double-circled. Output depends only on the slice contents.
inline std::string to_dot(const Structure& s, const TreeSlice& t, std::uint64_t step_cap = 1024) {
  std::set<Element> cyclic;
  if (t.cyclic_root || t.exclusive) {
    const CycleInfo ci = detect_cycle(s, t.root, step_cap);
    if (ci.found) cyclic.insert(ci.cyclic.begin(), ci.cyclic.end());
  }
  std::set<Element> nodes;
  for (const auto& level : t.levels) nodes.insert(level.begin(), level.end());

  std::ostringstream out;
  out << "digraph \"" << s.label() << "\" {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=circle, fontsize=10];\n";
  for (Element n : nodes) {
    out << "  n" << n << " [label=\"" << n << "\"";
    if (n == t.root) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& [c, p] : t.edges) {
    out << "  n" << c << " -> n" << p;
    if (cyclic.count(c) && cyclic.count(p)) out << " [style=solid, penwidth=2]";
    else out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace twoone
