#pragma once

// Finite-stage runs of three stagewise constructions of (2,1):1 structures
// over a toy registry of partial computable functions:
//  - a single 1-cycle at 0 whose split hairs are exactly a c.e. set C;
//  - a single 1-cycle at 0 with computable branching, built by a
//    finite-injury priority argument against P_e : phi_e != iso;
//  - a copy of the closed-form structure made of 1-cycles whose split
//    1-cycles 2e are driven by phi_e(e) halting.
// Every run records one StageRecord per stage; f is assigned exactly once
// per element and the final table is turned into a Structure whose oracles
// come from the trace.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twoone/error.hpp"
#include "twoone/registry.hpp"
#include "twoone/structure.hpp"

namespace twoone {

struct StageRecord {
  std::size_t stage = 0;
  std::string action;
  std::vector<Element> added;  // in order of definition
  std::vector<std::pair<Element, Element>> defined;  // (x, f(x))
  std::vector<std::string> events;
};

struct StageTrace {
  std::vector<StageRecord> stages;
  std::map<Element, Element> table;  // final f
};

/// The finite function built so far, with the bookkeeping every
/// construction needs: preimage counts, exclusive-tree levels under a root
/// cycle, and a guard against redefinition.
class ConstructionTable {
 public:
  void define(Element x, Element fx, StageRecord& rec) {
    if (!table_.emplace(x, fx).second) {
      throw InvalidArgument("f(" + std::to_string(x) + ") defined twice");
    }
    ++count_[fx];
    count_.try_emplace(x, 0);
    kids_[fx].push_back(x);
    rec.added.push_back(x);
    rec.defined.emplace_back(x, fx);
  }

  bool in_domain(Element x) const { return table_.count(x) != 0; }
  Element f(Element x) const { return table_.at(x); }

  std::size_t preimage_count(Element x) const {
    auto it = count_.find(x);
    return it == count_.end() ? 0 : it->second;
  }

  std::vector<Element> children(Element x) const {
    auto it = kids_.find(x);
    if (it == kids_.end()) return {};
    std::vector<Element> out;
    for (Element c : it->second) {
      if (c != x) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::map<Element, Element>& table() const { return table_; }

 private:
  std::map<Element, Element> table_;
  std::map<Element, std::size_t> count_;
  std::map<Element, std::vector<Element>> kids_;
};

/// Builds a handle over a finished construction table. Outside the table f
/// is the identity. The trace-derived branching oracle reports
/// max(1, preimages in table).
inline Structure structure_from_table(std::string label, const std::map<Element, Element>& table,
                                      bool iso_zero = false) {
  auto shared = std::make_shared<const std::map<Element, Element>>(table);
  auto counts = std::make_shared<std::map<Element, int>>();
  for (const auto& [x, y] : table) ++(*counts)[y];
  Evaluator eval = [shared](Element x) {
    auto it = shared->find(x);
    return it == shared->end() ? x : it->second;
  };
  OracleSet o;
  o.origin = OracleOrigin::ConstructionTrace;
  o.beta = [shared, counts](Element x) {
    if (!shared->count(x)) return 1;
    auto it = counts->find(x);
    return it == counts->end() ? 1 : std::max(1, it->second);
  };
  if (iso_zero) o.iso = [](Element) { return 0; };
  return Structure(std::move(label), std::move(eval), std::move(o));
}

// ---------------------------------------------------------------------------
// Closed-form structure made entirely of 1-cycles: odd numbers and 0 are
// fixed points, x = 2 (mod 4) maps to x - 1, other evens halve. Split
// hairs are x = 1 (mod 4), each carrying one infinite chain.

inline Element prop33a_f(Element x) {
  if (x == 0 || x % 2 == 1) return x;
  if (x % 4 == 2) return x - 1;
  return x / 2;
}

inline Structure structure_prop33A() {
  OracleSet o;
  o.origin = OracleOrigin::ClosedForm;
  o.beta = [](Element x) { return x % 4 == 1 ? 2 : 1; };
  o.iso = [](Element) { return 0; };
  return Structure("prop33a", prop33a_f, std::move(o));
}

// ---------------------------------------------------------------------------
// C.e.-driven branching.

struct Prop31Result {
  Structure structure;
  StageTrace trace;
  std::vector<Element> processed;  // elements that gained a second preimage, in order
};

/// Runs stages 0..stages. `chi` is the partial characteristic function of
/// C (it only ever halts with value 1).
inline Prop31Result construct_prop31(const StepFunction& chi, std::size_t stages) {
  ConstructionTable t;
  StageTrace trace;
  std::vector<std::vector<Element>> levels;
  std::map<Element, std::size_t> level_of;
  std::set<Element> hairs;  // exactly one preimage so far
  Element next_unused = 0;
  std::vector<Element> processed;

  auto refresh = [&](Element x) {
    if (t.preimage_count(x) == 1) hairs.insert(x);
    else hairs.erase(x);
  };
  auto add = [&](Element x, Element fx, std::size_t level, StageRecord& rec) {
    t.define(x, fx, rec);
    next_unused = std::max(next_unused, x + 1);
    if (levels.size() <= level) levels.resize(level + 1);
    levels[level].push_back(x);
    level_of[x] = level;
    refresh(fx);
    refresh(x);
  };

  {
    StageRecord rec{0, "init", {}, {}, {}};
    add(0, 0, 0, rec);
    trace.stages.push_back(std::move(rec));
  }
  if (stages >= 1) {
    StageRecord rec{1, "init", {}, {}, {}};
    add(1, 0, 1, rec);
    trace.stages.push_back(std::move(rec));
  }

  Registry single({StepFunction{0, chi.entries, chi.fallback}});
  for (std::size_t stage = 2; stage <= stages; ++stage) {
    const std::size_t s = stage - 1;  // building A_{s+1} from A_s; frontier is level s
    StageRecord rec{stage, "extend", {}, {}, {}};

    std::optional<Element> a;
    auto qualifies = [&](Element x) {
      const auto r = simulate(single, 0, x, s);
      return hairs.count(x) && r && *r == 1;
    };
    if (chi.everywhere_divergent_outside_entries()) {
      for (const auto& [x, conv] : chi.entries) {
        if (qualifies(x)) {
          a = x;
          break;
        }
      }
    } else {
      for (Element x : hairs) {
        if (qualifies(x)) {
          a = x;
          break;
        }
      }
    }

    if (a) {
      rec.action = "split";
      const Element x0 = next_unused;
      const std::size_t l = level_of.at(*a) + 1;
      add(x0, *a, l, rec);
      Element prev = x0;
      for (std::size_t i = 1; i + l <= s; ++i) {
        const Element xi = next_unused;
        add(xi, prev, l + i, rec);
        prev = xi;
      }
      processed.push_back(*a);
      rec.events.push_back("a=" + std::to_string(*a) + " enters the split hair set via x0=" +
                           std::to_string(x0) + " and a chain of " + std::to_string(s - l) +
                           " more");
    }
    std::vector<Element> frontier = levels.at(s);
    std::sort(frontier.begin(), frontier.end());
    for (Element e : frontier) add(next_unused, e, s + 1, rec);
    trace.stages.push_back(std::move(rec));
  }

  trace.table = t.table();
  return {structure_from_table("prop31", trace.table), std::move(trace), std::move(processed)};
}

// ---------------------------------------------------------------------------
// Priority construction against P_e : phi_e != iso.

struct Attention {
  std::size_t stage = 0;
  std::uint64_t requirement = 0;
  Element witness = 0;  // x with phi_{i,s}(x) = 1
  std::size_t level = 0;
};

struct Prop32State {
  std::size_t lowest_level = 0;                    // M_s
  std::map<std::uint64_t, std::size_t> assignments;  // e -> L_e
  std::set<std::uint64_t> attended;
  std::vector<Attention> attentions;
};

struct Prop32Result {
  Structure structure;
  StageTrace trace;
  Prop32State state;
  std::vector<std::vector<Element>> levels;  // levels of the exclusive tree of 0
};

/// Every even gets two preimages, so level n holds about 2^n elements;
/// exceeding `max_elements` raises TooLarge instead of exhausting memory.
inline constexpr std::size_t kProp32MaxElements = std::size_t{1} << 18;

inline Prop32Result construct_prop32(const Registry& r, std::size_t stages,
                                     std::size_t max_elements = kProp32MaxElements) {
  ConstructionTable t;
  StageTrace trace;
  Prop32State st;
  std::vector<std::vector<Element>> levels;
  Element next_even = 0, next_odd = 1;
  std::uint64_t next_e = 0;

  auto even = [&] {
    const Element v = next_even;
    next_even += 2;
    return v;
  };
  auto odd = [&] {
    const Element v = next_odd;
    next_odd += 2;
    return v;
  };
  auto put = [&](Element x, Element fx, std::size_t level, StageRecord& rec) {
    if (t.table().size() >= max_elements) {
      throw TooLarge("prop32: stage " + std::to_string(rec.stage) + " needs more than " +
                     std::to_string(max_elements) + " elements (level " + std::to_string(level) +
                     ")");
    }
    t.define(x, fx, rec);
    if (levels.size() <= level) levels.resize(level + 1);
    levels[level].push_back(x);
  };

  {
    StageRecord rec{0, "init", {}, {}, {}};
    put(even(), 0, 0, rec);
    put(even(), 0, 1, rec);
    trace.stages.push_back(std::move(rec));
    st.lowest_level = 1;
  }

  for (std::size_t stage = 1; stage <= stages; ++stage) {
    const std::size_t s = stage - 1;
    const std::size_t m = st.lowest_level;
    StageRecord rec{stage, "extend", {}, {}, {}};

    const std::uint64_t e = next_e++;
    st.assignments[e] = m;
    rec.events.push_back("assign phi_" + std::to_string(e) + " to level " + std::to_string(m));

    std::optional<std::pair<std::uint64_t, Element>> attention;
    for (std::uint64_t i = 0; i <= e && !attention; ++i) {
      if (st.attended.count(i) || !r.contains(i)) continue;
      auto level = levels.at(st.assignments.at(i));
      std::sort(level.begin(), level.end());
      for (Element x : level) {
        const auto v = simulate(r, i, x, s);
        if (v && *v == 1) {
          attention = {i, x};
          break;
        }
      }
    }

    auto frontier = levels.at(m);
    std::sort(frontier.begin(), frontier.end());
    if (!attention) {
      for (Element z : frontier) {
        // The frontier only ever holds evens; an odd would get one preimage.
        put(even(), z, m + 1, rec);
        if (z % 2 == 0) put(even(), z, m + 1, rec);
      }
      st.lowest_level = m + 1;
    } else {
      const auto [i, x] = *attention;
      const std::size_t li = st.assignments.at(i);
      rec.action = "attention";
      rec.events.push_back("P_" + std::to_string(i) + " requires attention: phi_" +
                           std::to_string(i) + "(" + std::to_string(x) + ") = 1 on level " +
                           std::to_string(li));
      if (li < m) {
        auto assigned = levels.at(li);
        std::sort(assigned.begin(), assigned.end());
        // Group the frontier by its ancestor on level li + 1.
        std::map<Element, std::vector<Element>> under;
        for (Element z : frontier) {
          Element anc = z;
          for (std::size_t k = 0; k < m - li - 1; ++k) anc = t.f(anc);
          under[anc].push_back(z);
        }
        for (Element xp : assigned) {
          const auto kids = t.children(xp);
          if (kids.size() != 2) {
            throw InvalidArgument("prop32: element " + std::to_string(xp) +
                                  " on an assigned level lacks two preimages");
          }
          for (Element z : under[kids[0]]) {
            put(odd(), z, m + 1, rec);
            put(odd(), z, m + 1, rec);
          }
          for (Element z : under[kids[1]]) {
            put(even(), z, m + 1, rec);
            put(even(), z, m + 1, rec);
          }
        }
      } else {
        for (Element z : frontier) {
          put(odd(), z, m + 1, rec);
          put(even(), z, m + 1, rec);
        }
      }
      auto completed = levels.at(m + 1);
      std::sort(completed.begin(), completed.end());
      for (Element z : completed) {
        put(even(), z, m + 2, rec);
        if (z % 2 == 0) put(even(), z, m + 2, rec);
      }
      st.lowest_level = m + 2;
      st.attended.insert(i);
      st.attentions.push_back({stage, i, x, li});
    }
    trace.stages.push_back(std::move(rec));
  }

  for (auto& l : levels) std::sort(l.begin(), l.end());
  trace.table = t.table();
  Structure s = structure_from_table("prop32", trace.table);
  return {std::move(s), std::move(trace), std::move(st), std::move(levels)};
}

// ---------------------------------------------------------------------------
// Halting-driven copy of the closed-form structure.

struct Prop33BResult {
  Structure structure;
  StageTrace trace;
  std::vector<std::uint64_t> processed;  // e whose cycle 2e received a tree
};

inline Prop33BResult construct_prop33B(const Registry& r, std::size_t stages) {
  ConstructionTable t;
  StageTrace trace;
  Element next_odd = 1;
  std::vector<Element> tips;  // end of each degenerate tree, in creation order
  std::vector<std::uint64_t> processed;

  auto odd = [&] {
    const Element v = next_odd;
    next_odd += 2;
    return v;
  };

  {
    StageRecord rec{0, "init", {}, {}, {}};
    t.define(0, 0, rec);
    trace.stages.push_back(std::move(rec));
  }

  for (std::size_t stage = 1; stage <= stages; ++stage) {
    const std::size_t s = stage - 1;
    StageRecord rec{stage, "cycle", {}, {}, {}};

    std::optional<std::uint64_t> chosen;
    for (std::uint64_t e = 0; e <= s; ++e) {
      const Element c = 2 * e;
      if (!t.in_domain(c) || t.f(c) != c || t.preimage_count(c) != 1) continue;
      if (simulate_or_diverge(r, e, e, s)) {
        chosen = e;
        break;
      }
    }

    const std::size_t existing = tips.size();
    if (chosen) {
      rec.action = "tree";
      // A height-0 tree would leave 2e a hair forever; use at least one node.
      const std::size_t height = std::max<std::size_t>(s, 1);
      Element prev = 2 * *chosen;
      for (std::size_t k = 0; k < height; ++k) {
        const Element o = odd();
        t.define(o, prev, rec);
        prev = o;
      }
      tips.push_back(prev);
      processed.push_back(*chosen);
      rec.events.push_back("phi_" + std::to_string(*chosen) + "(" + std::to_string(*chosen) +
                           ") halted: degenerate tree of height " + std::to_string(height) +
                           " on " + std::to_string(2 * *chosen));
    }
    for (std::size_t k = 0; k < existing; ++k) {
      const Element o = odd();
      t.define(o, tips[k], rec);
      tips[k] = o;
    }
    const Element fresh = 2 * static_cast<Element>(stage);
    t.define(fresh, fresh, rec);
    trace.stages.push_back(std::move(rec));
  }

  trace.table = t.table();
  return {structure_from_table("prop33b", trace.table, /*iso_zero=*/true), std::move(trace),
          std::move(processed)};
}

}  // namespace twoone
