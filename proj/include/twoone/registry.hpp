#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twoone/error.hpp"
#include "twoone/structure.hpp"

namespace twoone {

struct Convergence {
  Element value = 0;
  std::uint64_t steps = 0;  // halts after exactly this many steps
};

/// A toy partial computable function: finitely many explicit inputs plus a
/// default behaviour for everything else (divergent unless given).
struct StepFunction {
  std::uint64_t id = 0;
  std::map<Element, Convergence> entries;
  std::optional<Convergence> fallback;

  std::optional<Convergence> behavior(Element x) const {
    if (auto it = entries.find(x); it != entries.end()) return it->second;
    return fallback;
  }

  bool everywhere_divergent_outside_entries() const { return !fallback.has_value(); }
};

/// Result of running a function for a bounded number of steps: the value
/// when it halted within the budget, nullopt while still running.
using SimResult = std::optional<Element>;

/// Functions indexed densely by e = 0..size()-1.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<StepFunction> fns) : functions_(std::move(fns)) {
    for (std::size_t e = 0; e < functions_.size(); ++e) {
      if (functions_[e].id != e) {
        throw SpecError("registry indices must be dense: position " + std::to_string(e) +
                        " holds e=" + std::to_string(functions_[e].id));
      }
    }
  }

  std::size_t size() const { return functions_.size(); }
  bool contains(std::uint64_t e) const { return e < functions_.size(); }

  const StepFunction& at(std::uint64_t e) const {
    if (!contains(e)) {
      throw UnknownIndex("no function with index " + std::to_string(e) + " (registry has " +
                         std::to_string(functions_.size()) + ")");
    }
    return functions_[e];
  }

  const std::vector<StepFunction>& functions() const { return functions_; }

 private:
  std::vector<StepFunction> functions_;
};

/// phi_{e,s}(x): halted with a value iff the behaviour converges within s
/// steps. Monotone in s.
inline SimResult simulate(const Registry& r, std::uint64_t e, Element x, std::uint64_t s) {
  const auto b = r.at(e).behavior(x);
  if (b && b->steps <= s) return b->value;
  return std::nullopt;
}

/// Like simulate, but indices beyond the registry behave as the everywhere
/// divergent function. Constructions enumerate phi_0, phi_1, ... without end.
inline SimResult simulate_or_diverge(const Registry& r, std::uint64_t e, Element x,
                                     std::uint64_t s) {
  if (!r.contains(e)) return std::nullopt;
  return simulate(r, e, x, s);
}

}  // namespace twoone
