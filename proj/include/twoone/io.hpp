#pragma once

// JSON forms of structure specs, registries and every result type.
//
// Structure spec:
//   {"kind": "closed-form", "name": "prop33a" | "zchain" | "identity"}
//   {"kind": "closed-form", "name": "assembled", "cycles": [["D", "E"], ["F"], ...]}
//       shapes: "E" | "D" | "F" | ["fork", shape, shape]
//   {"kind": "table", "name": ..., "f": [f(0), ..., f(n)], "fallback": "identity",
//    "beta": [...], "iso": [...]}            (beta/iso optional, same indexing)
//   {"kind": "construction", "name": "prop31" | "prop32" | "prop33b", "stages": N,
//    "registry": [...] | "registry_file": path, "chi": e}   (chi: prop31 only)
//   {"kind": "conjugate", "base": spec, "n": N, "seed": s | "permutation": [...],
//    "oracles": true}
//
// Registry: [{"e": 0, "entries": [{"x": 2, "value": 1, "steps": 3}],
//             "default": "divergent" | {"value": v, "steps": k}}, ...]

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twoone/constructions.hpp"
#include "twoone/core.hpp"
#include "twoone/error.hpp"
#include "twoone/families.hpp"
#include "twoone/isobuilder.hpp"
#include "twoone/registry.hpp"
#include "twoone/structure.hpp"
#include "twoone/treeiso.hpp"

namespace twoone {

using json = nlohmann::ordered_json;

namespace detail {

template <typename T>
T get_field(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw SpecError(std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(std::string(what) + ": bad \"" + key + "\": " + e.what());
  }
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw SpecError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SpecError(p.string() + ": " + e.what());
  }
}

}  // namespace detail

// ----------------------------------------------------------------- registry

inline Convergence convergence_from_json(const json& j) {
  return {detail::get_field<Element>(j, "value", "convergence"),
          detail::get_field<std::uint64_t>(j, "steps", "convergence")};
}

inline Registry registry_from_json(const json& j) {
  if (!j.is_array()) throw SpecError("registry must be a JSON array");
  std::vector<StepFunction> fns;
  for (const auto& item : j) {
    StepFunction fn;
    fn.id = detail::get_field<std::uint64_t>(item, "e", "registry entry");
    if (item.contains("entries")) {
      for (const auto& en : item.at("entries")) {
        const auto x = detail::get_field<Element>(en, "x", "registry entry");
        if (!fn.entries.emplace(x, convergence_from_json(en)).second) {
          throw SpecError("registry: duplicate input " + std::to_string(x) + " for e=" +
                          std::to_string(fn.id));
        }
      }
    }
    if (item.contains("default")) {
      const auto& d = item.at("default");
      if (d.is_string()) {
        if (d.get<std::string>() != "divergent") {
          throw SpecError("registry: default must be \"divergent\" or {value, steps}");
        }
      } else {
        fn.fallback = convergence_from_json(d);
      }
    }
    fns.push_back(std::move(fn));
  }
  std::sort(fns.begin(), fns.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return Registry(std::move(fns));
}

inline json to_json(const Registry& r) {
  json arr = json::array();
  for (const auto& fn : r.functions()) {
    json entries = json::array();
    for (const auto& [x, c] : fn.entries) entries.push_back({{"x", x}, {"value", c.value}, {"steps", c.steps}});
    json item{{"e", fn.id}, {"entries", entries}};
    if (fn.fallback) item["default"] = {{"value", fn.fallback->value}, {"steps", fn.fallback->steps}};
    else item["default"] = "divergent";
    arr.push_back(item);
  }
  return arr;
}

// ---------------------------------------------------------------- structure

inline Shape shape_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "E") return Shape::empty();
    if (s == "D") return Shape::chain();
    if (s == "F") return Shape::full();
    throw SpecError("unknown shape \"" + s + "\"");
  }
  if (j.is_array() && j.size() == 3 && j[0] == "fork") {
    return Shape::fork(shape_from_json(j[1]), shape_from_json(j[2]));
  }
  throw SpecError("shape must be \"E\", \"D\", \"F\" or [\"fork\", a, b]");
}

inline Registry registry_from_spec(const json& spec, const std::filesystem::path& base_dir) {
  if (spec.contains("registry")) return registry_from_json(spec.at("registry"));
  if (spec.contains("registry_file")) {
    std::filesystem::path p = detail::get_field<std::string>(spec, "registry_file", "construction");
    if (p.is_relative()) p = base_dir / p;
    return registry_from_json(detail::read_json_file(p));
  }
  return Registry{};
}

inline Structure structure_from_spec(const json& spec,
                                     const std::filesystem::path& base_dir = ".") {
  if (!spec.is_object()) throw SpecError("structure spec must be a JSON object");
  const json& s = spec.contains("structure") ? spec.at("structure") : spec;
  const auto kind = detail::get_field<std::string>(s, "kind", "structure spec");

  if (kind == "closed-form") {
    const auto name = detail::get_field<std::string>(s, "name", "closed-form spec");
    if (name == "prop33a") return structure_prop33A();
    if (name == "zchain") return structure_zchain();
    if (name == "identity") return structure_identity();
    if (name == "assembled") {
      std::vector<std::vector<Shape>> cycles;
      for (const auto& cyc : detail::get_field<json>(s, "cycles", "assembled spec")) {
        std::vector<Shape> shapes;
        for (const auto& sh : cyc) shapes.push_back(shape_from_json(sh));
        cycles.push_back(std::move(shapes));
      }
      return AssembledStructure(std::move(cycles)).structure();
    }
    throw SpecError("unknown closed-form structure \"" + name + "\"");
  }

  if (kind == "table") {
    const auto values = detail::get_field<std::vector<Element>>(s, "f", "table spec");
    const auto name = s.value("name", std::string("table"));
    const auto fallback = s.value("fallback", std::string("identity"));
    if (fallback != "identity") throw SpecError("table fallback must be \"identity\"");
    auto table = std::make_shared<const std::vector<Element>>(values);
    Evaluator eval = [table](Element x) { return x < table->size() ? (*table)[x] : x; };
    if (!s.contains("beta") && !s.contains("iso")) return Structure(name, std::move(eval));
    OracleSet o;
    o.origin = OracleOrigin::Supplied;
    if (s.contains("beta")) {
      auto b = std::make_shared<const std::vector<int>>(
          detail::get_field<std::vector<int>>(s, "beta", "table spec"));
      o.beta = [b](Element x) { return x < b->size() ? (*b)[x] : 1; };
    }
    if (s.contains("iso")) {
      auto v = std::make_shared<const std::vector<int>>(
          detail::get_field<std::vector<int>>(s, "iso", "table spec"));
      o.iso = [v](Element x) { return x < v->size() ? (*v)[x] : 0; };
    }
    return Structure(name, std::move(eval), std::move(o));
  }

  if (kind == "construction") {
    const auto name = detail::get_field<std::string>(s, "name", "construction spec");
    const auto stages = detail::get_field<std::size_t>(s, "stages", "construction spec");
    const Registry reg = registry_from_spec(s, base_dir);
    if (name == "prop31") {
      const auto e = s.value("chi", std::uint64_t{0});
      return construct_prop31(reg.at(e), stages).structure;
    }
    if (name == "prop32") return construct_prop32(reg, stages).structure;
    if (name == "prop33b") return construct_prop33B(reg, stages).structure;
    throw SpecError("unknown construction \"" + name + "\"");
  }

  if (kind == "conjugate") {
    const Structure base = structure_from_spec(detail::get_field<json>(s, "base", "conjugate spec"),
                                               base_dir);
    const bool with_oracles = s.value("oracles", true);
    if (s.contains("permutation")) {
      return conjugate(base, Relabeling(detail::get_field<std::vector<Element>>(s, "permutation", "conjugate spec")),
                       with_oracles);
    }
    const auto n = detail::get_field<Element>(s, "n", "conjugate spec");
    const auto seed = detail::get_field<std::uint64_t>(s, "seed", "conjugate spec");
    return conjugate(base, Relabeling::random(n, seed), with_oracles);
  }

  throw SpecError("unknown structure kind \"" + kind + "\"");
}

inline Structure structure_from_file(const std::filesystem::path& p) {
  return structure_from_spec(detail::read_json_file(p), p.parent_path());
}

// ------------------------------------------------------------------ results

inline json to_json(const PreimageResult& p) {
  return {{"found", p.found}, {"complete", p.complete}};
}

inline json to_json(const CycleInfo& c) {
  json j{{"found", c.found}, {"step_cap", c.step_cap}};
  if (c.found) {
    j["length"] = c.length;
    j["cyclic"] = c.cyclic;
    j["entry_steps"] = c.entry_steps;
  } else {
    j["verdict"] = "unresolved up to step cap";
  }
  return j;
}

inline json to_json(const TreeSlice& t) {
  json edges = json::array();
  for (const auto& [c, p] : t.edges) edges.push_back({c, p});
  return {{"root", t.root},           {"depth", t.depth},
          {"exclusive", t.exclusive}, {"cyclic_root", t.cyclic_root},
          {"complete", t.complete},   {"search_bound", t.search_bound},
          {"levels", t.levels},       {"edges", edges}};
}

inline json to_json(const RegionReport& r) {
  return {{"region", {0, r.region_end}},
          {"bound", r.bound},
          {"hairs", r.hairs},
          {"split_hairs", r.split_hairs},
          {"unconfirmed", r.unconfirmed}};
}

inline json to_json(const PartialIso& h) {
  json pairs = json::array();
  for (const auto& [x, y] : h.pairs) pairs.push_back({x, y, h.stage_fixed.at(x)});
  json roots = json::array();
  for (const auto& [r, cyc] : h.roots) roots.push_back({{"root", r}, {"cyclic", cyc}});
  return {{"pairs", pairs}, {"roots", roots}, {"stages_run", h.stages_run}, {"complete", h.complete}};
}

inline PartialIso partial_iso_from_json(const json& j) {
  PartialIso h;
  const json& src = j.contains("iso") ? j.at("iso") : j;
  for (const auto& p : detail::get_field<json>(src, "pairs", "partial iso")) {
    if (!p.is_array() || p.size() != 3) throw SpecError("partial iso pairs are [x, y, stage]");
    h.fix(p[0].get<Element>(), p[1].get<Element>(), p[2].get<std::size_t>());
  }
  if (src.contains("roots")) {
    for (const auto& r : src.at("roots")) {
      h.roots[detail::get_field<Element>(r, "root", "partial iso root")] = r.value("cyclic", false);
    }
  }
  h.stages_run = src.value("stages_run", std::size_t{0});
  h.complete = src.value("complete", false);
  return h;
}

inline json to_json(const VerifyReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"kind", x.kind}, {"x", x.x}, {"detail", x.detail}});
  return {{"ok", r.ok()}, {"pairs_checked", r.pairs_checked}, {"violations", v}};
}

inline json to_json(const CycleMatching& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) pairs.push_back({{"a", p.a}, {"b", p.b}});
  return {{"k", m.k},
          {"depth", m.depth},
          {"pairs", pairs},
          {"unmatched_a", m.unmatched_a},
          {"unmatched_b", m.unmatched_b}};
}

inline json to_json(const StageRecord& r) {
  json defined = json::array();
  for (const auto& [x, fx] : r.defined) defined.push_back({x, fx});
  return {{"stage", r.stage},
          {"action", r.action},
          {"added", r.added},
          {"defined", defined},
          {"events", r.events}};
}

/// One JSON document per line, one line per stage.
inline std::string to_json_lines(const StageTrace& t) {
  std::ostringstream out;
  for (const auto& r : t.stages) out << to_json(r).dump() << '\n';
  return out.str();
}

inline json to_json(const Prop32State& s) {
  json assignments = json::array();
  for (const auto& [e, l] : s.assignments) assignments.push_back({{"e", e}, {"level", l}});
  json att = json::array();
  for (const auto& a : s.attentions) {
    att.push_back({{"stage", a.stage}, {"requirement", a.requirement}, {"x", a.witness}, {"level", a.level}});
  }
  return {{"lowest_level", s.lowest_level},
          {"assignments", assignments},
          {"attended", s.attended},
          {"attentions", att}};
}

inline json table_to_json(const std::map<Element, Element>& table) {
  json arr = json::array();
  for (const auto& [x, y] : table) arr.push_back({x, y});
  return arr;
}

}  // namespace twoone
