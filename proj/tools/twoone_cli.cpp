// twoone: build, inspect, compare and export (2,1):1 structures.
//
// Every verb prints one JSON document on stdout (--format json, default) or
// aligned key/value text (--format text). Exit codes: 0 success (bounded
// "unresolved" verdicts included), 1 domain error, 2 argument error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twoone/twoone.hpp"

namespace {

using twoone::Element;
using twoone::json;

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_spec(const std::string& where) {
  try {
    if (where == "-") {
      std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
      return json::parse(text);
    }
    std::ifstream in(where);
    if (!in) throw ArgumentError("cannot open " + where);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ArgumentError(where + ": " + e.what());
  }
}

std::filesystem::path dir_of(const std::string& where) {
  if (where == "-") return ".";
  auto p = std::filesystem::path(where).parent_path();
  return p.empty() ? std::filesystem::path(".") : p;
}

/// Spec document as given, minus any wrapper produced by `construct`/`build`.
json bare_spec(const json& doc) { return doc.contains("structure") ? doc.at("structure") : doc; }

std::pair<Element, Element> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const Element v = std::stoull(text);
      return {0, v};
    }
    const Element lo = std::stoull(text.substr(0, dots));
    const Element hi = std::stoull(text.substr(dots + 2));
    if (lo > hi) throw ArgumentError("empty range " + text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ArgumentError("bad range \"" + text + "\" (expected a..b)");
  }
}

void print_text(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) {
      if (v.is_object()) {
        out << prefix << k << ":\n";
        print_text(v, prefix + "  ", out);
      } else {
        out << prefix << k << std::string(width - k.size() + 2, ' ') << v.dump() << '\n';
      }
    }
  } else {
    out << prefix << j.dump() << '\n';
  }
}

void emit(const json& j, const std::string& format) {
  if (format == "text") print_text(j, "", std::cout);
  else std::cout << j.dump(2) << '\n';
}

twoone::IsoConfig iso_config(std::size_t stages, Element bound, std::size_t level_cap,
                             Element element_bound, std::size_t match_depth) {
  twoone::IsoConfig cfg;
  cfg.stage_budget = stages;
  cfg.search_bound = bound;
  cfg.separating_level_cap = level_cap;
  cfg.element_bound = element_bound;
  cfg.match_depth = match_depth;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explore (2,1):1 structures: slices, branching, isomorphisms, constructions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for randomized relabelings (tests only)");

  // Shared option values.
  std::string spec = "-", spec_a, spec_b, registry_path, iso_path, trace_out, out_path;
  Element bound = 1000, x = 0, x1 = 0, x2 = 0, root = 0, a0 = 0, b0 = 0, element_bound = 256;
  std::size_t depth = 3, stages = 8, level_cap = 16, match_depth = 3;
  std::uint64_t step_cap = 1000, forward = 16, times = 1, k = 0, chi = 0;
  std::vector<std::uint64_t> ks;
  bool exclusive = false, cyclic = false, with_table = false;
  std::optional<Element> opt_apply, opt_iterate, opt_preimages, opt_branching, opt_cycle;
  std::string beta_range;

  auto spec_opt = [&](CLI::App* c) {
    c->add_option("--spec", spec, "Structure spec file, or - for stdin")->capture_default_str();
  };
  auto bound_opt = [&](CLI::App* c) {
    c->add_option("--bound", bound, "Search bound for preimage scans")->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "Load a structure spec and tabulate f");
  spec_opt(build);
  build->add_option("--bound", bound, "Tabulate f on 0..bound")->capture_default_str();

  auto* inspect = app.add_subcommand("inspect", "Apply, iterate, preimages, branching, cycles, regions");
  spec_opt(inspect);
  bound_opt(inspect);
  inspect->add_option("--apply", opt_apply, "f(x)");
  inspect->add_option("--iterate", opt_iterate, "f^n(x) with n = --times");
  inspect->add_option("--times", times, "Iteration count for --iterate");
  inspect->add_option("--preimages", opt_preimages, "Preimages of x up to --bound");
  inspect->add_option("--branching", opt_branching, "Branching value of x");
  inspect->add_option("--cycle", opt_cycle, "Cycle detection from x");
  inspect->add_option("--step-cap", step_cap, "Step cap for cycle detection")->capture_default_str();
  inspect->add_option("--beta", beta_range, "Classify a range a..b into hairs / split hairs");

  auto* orbit = app.add_subcommand("orbit", "Finite sample of the orbit of x");
  spec_opt(orbit);
  bound_opt(orbit);
  orbit->add_option("--x", x, "Element")->required();
  orbit->add_option("--forward", forward, "Forward iterations")->capture_default_str();

  auto* tree = app.add_subcommand("tree", "Tree of x truncated at --depth");
  spec_opt(tree);
  bound_opt(tree);
  tree->add_option("--root", root, "Root element")->required();
  tree->add_option("--depth", depth, "Truncation level")->capture_default_str();

  auto* extree = app.add_subcommand("extree", "Exclusive tree of a cyclic element");
  spec_opt(extree);
  bound_opt(extree);
  extree->add_option("--root", root, "Cyclic element")->required();
  extree->add_option("--k", k, "Cycle length (detected when omitted)");
  extree->add_option("--depth", depth, "Truncation level")->capture_default_str();
  extree->add_option("--step-cap", step_cap, "Step cap for cycle detection")->capture_default_str();

  auto* iso = app.add_subcommand("iso", "Stagewise isomorphism between two structures");
  iso->add_option("--A", spec_a, "Source structure spec (needs branching and iso oracles)")->required();
  iso->add_option("--B", spec_b, "Target structure spec")->required();
  iso->add_option("--a0", a0, "Source root");
  iso->add_option("--b0", b0, "Target root");
  iso->add_flag("--cyclic", cyclic, "Roots are cyclic: build the exclusive-tree isomorphism");
  iso->add_option("--k", k, "Cycle length for --cyclic (detected when omitted)");
  iso->add_option("--ks", ks, "Cycle lengths: assemble a structure-level isomorphism")->delimiter(',');
  iso->add_option("--stages", stages, "Stage budget")->capture_default_str();
  iso->add_option("--level-cap", level_cap, "Separating level cap")->capture_default_str();
  iso->add_option("--element-bound", element_bound, "Least-element bound for cycles")->capture_default_str();
  iso->add_option("--match-depth", match_depth, "Initial cycle-matching depth")->capture_default_str();
  iso->add_option("--step-cap", step_cap, "Step cap for cycle detection")->capture_default_str();
  bound_opt(iso);

  auto* cmp = app.add_subcommand("tree-cmp", "Compare Tree(x1, depth) with Tree(x2, depth)");
  spec_opt(cmp);
  bound_opt(cmp);
  cmp->add_option("--x1", x1, "First root")->required();
  cmp->add_option("--x2", x2, "Second root")->required();
  cmp->add_option("--depth", depth, "Truncation level")->capture_default_str();
  cmp->add_option("--level-cap", level_cap, "Cap for the separating-level search")->capture_default_str();

  std::string which;
  auto* construct = app.add_subcommand("construct", "Run a stagewise construction");
  construct->add_option("name", which, "prop31 | prop32 | prop33a | prop33b")
      ->required()
      ->check(CLI::IsMember({"prop31", "prop32", "prop33a", "prop33b"}));
  construct->add_option("--stages", stages, "Stage budget")->capture_default_str();
  construct->add_option("--registry", registry_path, "Registry JSON file");
  construct->add_option("--chi", chi, "Registry index of the characteristic function (prop31)")
      ->capture_default_str();
  construct->add_option("--trace-out", trace_out, "Write the stage trace as JSON lines");
  construct->add_flag("--table", with_table, "Include the final table of f");

  auto* verify = app.add_subcommand("verify", "Check a partial isomorphism");
  verify->add_option("--A", spec_a, "Source structure spec")->required();
  verify->add_option("--B", spec_b, "Target structure spec")->required();
  verify->add_option("--iso", iso_path, "Partial isomorphism JSON (output of `iso`)")->required();
  bound_opt(verify);

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a slice");
  spec_opt(dot);
  bound_opt(dot);
  dot->add_option("--root", root, "Root element")->required();
  dot->add_option("--depth", depth, "Truncation level")->capture_default_str();
  dot->add_flag("--exclusive", exclusive, "Exclusive tree of a cyclic root");
  dot->add_option("--k", k, "Cycle length for --exclusive (detected when omitted)");
  dot->add_option("--step-cap", step_cap, "Step cap for cycle detection")->capture_default_str();
  dot->add_option("--out", out_path, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto cycle_length = [&](const twoone::Structure& s, Element c) -> std::uint64_t {
    if (k != 0) return k;
    const auto ci = twoone::detect_cycle(s, c, step_cap);
    if (!ci.found || ci.entry_steps != 0) {
      throw twoone::NotCyclic(std::to_string(c) + " is not on a cycle found within " +
                              std::to_string(step_cap) + " steps");
    }
    return ci.length;
  };

  try {
    if (*build) {
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      json table = json::array();
      for (Element i = 0; i <= bound; ++i) table.push_back(s.apply(i));
      emit({{"structure", bare_spec(doc)},
            {"label", s.label()},
            {"oracles", s.oracles() ? json{{"beta", s.has_beta()}, {"iso", s.has_iso()},
                                           {"origin", twoone::to_string(s.oracles()->origin)}}
                                    : json(nullptr)},
            {"f", table}},
           format);
      return 0;
    }

    if (*inspect) {
      const auto [lo, hi] = beta_range.empty() ? std::pair<Element, Element>{0, 0} : parse_range(beta_range);
      if (!opt_apply && !opt_iterate && !opt_preimages && !opt_branching && !opt_cycle && beta_range.empty()) {
        throw ArgumentError("inspect: give at least one of --apply --iterate --preimages --branching --cycle --beta");
      }
      if (opt_cycle && step_cap < 1) throw ArgumentError("--step-cap must be >= 1");
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      json out{{"label", s.label()}};
      if (opt_apply) out["apply"] = {{"x", *opt_apply}, {"value", s.apply(*opt_apply)}};
      if (opt_iterate) {
        out["iterate"] = {{"x", *opt_iterate}, {"times", times}, {"value", s.iterate(*opt_iterate, times)}};
      }
      if (opt_preimages) {
        out["preimages"] = twoone::to_json(twoone::preimages(s, *opt_preimages, bound));
        out["preimages"]["x"] = *opt_preimages;
      }
      if (opt_branching) {
        out["branching"] = {{"x", *opt_branching},
                            {"value", twoone::to_string(twoone::branching(s, *opt_branching, bound))}};
      }
      if (opt_cycle) out["cycle"] = twoone::to_json(twoone::detect_cycle(s, *opt_cycle, step_cap));
      if (!beta_range.empty()) {
        const auto rep = twoone::region_report(s, hi, bound);
        auto clip = [lo = lo](const std::vector<Element>& v) {
          std::vector<Element> r;
          for (Element e : v) if (e >= lo) r.push_back(e);
          return r;
        };
        out["beta"] = {{"range", {lo, hi}},
                       {"bound", bound},
                       {"hairs", clip(rep.hairs)},
                       {"split_hairs", clip(rep.split_hairs)},
                       {"unconfirmed", clip(rep.unconfirmed)}};
      }
      emit(out, format);
      return 0;
    }

    if (*orbit) {
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      const auto o = twoone::orbit_sample(s, x, forward, bound);
      emit({{"x", x}, {"forward", forward}, {"bound", bound}, {"elements", o}}, format);
      return 0;
    }

    if (*tree) {
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      emit(twoone::to_json(twoone::tree_slice(s, root, depth, bound)), format);
      return 0;
    }

    if (*extree) {
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      const auto kk = cycle_length(s, root);
      json out = twoone::to_json(twoone::extree_slice(s, root, kk, depth, bound));
      out["k"] = kk;
      emit(out, format);
      return 0;
    }

    if (*iso) {
      if (stages == 0) throw ArgumentError("--stages must be positive");
      if (bound == 0) throw ArgumentError("--bound must be positive");
      const auto sa = twoone::structure_from_spec(read_spec(spec_a), dir_of(spec_a));
      const auto sb = twoone::structure_from_spec(read_spec(spec_b), dir_of(spec_b));
      const auto cfg = iso_config(stages, bound, level_cap, element_bound, match_depth);
      twoone::PartialIso h;
      std::string mode;
      if (!ks.empty()) {
        mode = "structure";
        h = twoone::build_structure_iso(sa, sb, ks, cfg);
      } else if (cyclic) {
        mode = "extree";
        h = twoone::build_extree_iso(sa, a0, cycle_length(sa, a0), sb, b0, cfg);
      } else {
        mode = "tree";
        h = twoone::build_tree_iso(sa, a0, sb, b0, cfg);
      }
      json out{{"mode", mode}, {"iso", twoone::to_json(h)}};
      emit(out, format);
      return 0;
    }

    if (*cmp) {
      if (x1 == x2) throw ArgumentError("tree-cmp: --x1 and --x2 must differ");
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      const auto t1 = twoone::tree_slice(s, x1, depth, bound);
      const auto t2 = twoone::tree_slice(s, x2, depth, bound);
      json out{{"x1", x1}, {"x2", x2}, {"depth", depth}, {"isomorphic", twoone::truncations_isomorphic(t1, t2)}};
      out["codes"] = {t1.is_tree() ? json(twoone::canonical_code(t1).to_string()) : json("cyclic"),
                      t2.is_tree() ? json(twoone::canonical_code(t2).to_string()) : json("cyclic")};
      const auto sep = twoone::separating_level(s, x1, x2, level_cap, bound);
      out["separating_level"] = sep ? json(*sep) : json(nullptr);
      out["verdict"] = sep ? "separated" : "not separated up to level cap";
      emit(out, format);
      return 0;
    }

    if (*construct) {
      twoone::Registry reg;
      json reg_json = json::array();
      if (!registry_path.empty()) {
        reg_json = read_spec(registry_path);
        reg = twoone::registry_from_json(reg_json);
      }
      if (which == "prop31" && !reg.contains(chi)) {
        throw ArgumentError("prop31 needs --registry with a function at index " + std::to_string(chi));
      }
      json out;
      twoone::StageTrace trace;
      if (which == "prop33a") {
        out["structure"] = {{"kind", "closed-form"}, {"name", "prop33a"}};
      } else {
        json sp{{"kind", "construction"}, {"name", which}, {"stages", stages}, {"registry", twoone::to_json(reg)}};
        if (which == "prop31") sp["chi"] = chi;
        out["structure"] = sp;
      }
      if (which == "prop31") {
        auto r = twoone::construct_prop31(reg.at(chi), stages);
        out["processed"] = r.processed;
        trace = std::move(r.trace);
      } else if (which == "prop32") {
        auto r = twoone::construct_prop32(reg, stages);
        out["state"] = twoone::to_json(r.state);
        trace = std::move(r.trace);
      } else if (which == "prop33b") {
        auto r = twoone::construct_prop33B(reg, stages);
        out["processed"] = r.processed;
        trace = std::move(r.trace);
      }
      if (which != "prop33a") {
        out["domain_size"] = trace.table.size();
        out["stages_run"] = trace.stages.empty() ? 0 : trace.stages.back().stage;
        if (with_table) out["table"] = twoone::table_to_json(trace.table);
        if (!trace_out.empty()) {
          std::ofstream tf(trace_out);
          if (!tf) throw ArgumentError("cannot write " + trace_out);
          tf << twoone::to_json_lines(trace);
        }
      }
      emit(out, format);
      return 0;
    }

    if (*verify) {
      const auto sa = twoone::structure_from_spec(read_spec(spec_a), dir_of(spec_a));
      const auto sb = twoone::structure_from_spec(read_spec(spec_b), dir_of(spec_b));
      const auto h = twoone::partial_iso_from_json(read_spec(iso_path));
      emit(twoone::to_json(twoone::verify_partial_iso(sa, sb, h, bound)), format);
      return 0;
    }

    if (*dot) {
      const json doc = read_spec(spec);
      const auto s = twoone::structure_from_spec(doc, dir_of(spec));
      const auto t = exclusive ? twoone::extree_slice(s, root, cycle_length(s, root), depth, bound)
                               : twoone::tree_slice(s, root, depth, bound);
      const std::string text = twoone::to_dot(s, t, step_cap);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream of(out_path);
        if (!of) throw ArgumentError("cannot write " + out_path);
        of << text;
      }
      return 0;
    }
  } catch (const ArgumentError& e) {
    std::cerr << json{{"error", "ArgumentError"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const twoone::SpecError& e) {
    std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const twoone::InvalidArgument& e) {
    std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const twoone::Error& e) {
    std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
