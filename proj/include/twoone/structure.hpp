#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twoone/error.hpp"

namespace twoone {

/// Elements of a countable structure are natural numbers.
using Element = std::uint64_t;

/// A total, deterministic map on the naturals.
using Evaluator = std::function<Element(Element)>;

enum class OracleOrigin { Supplied, ClosedForm, ConstructionTrace };

inline const char* to_string(OracleOrigin o) {
  switch (o) {
    case OracleOrigin::Supplied: return "supplied";
    case OracleOrigin::ClosedForm: return "closed-form";
    case OracleOrigin::ConstructionTrace: return "construction-trace";
  }
  return "?";
}

/// Optional side information about a structure: its branching function
/// (preimage count, 1 or 2) and its branch isomorphism function (0 or 1,
/// meaningful only where the branching function is 2). Either may be empty.
struct OracleSet {
  std::function<int(Element)> beta;
  std::function<int(Element)> iso;
  OracleOrigin origin = OracleOrigin::Supplied;

  bool has_beta() const { return static_cast<bool>(beta); }
  bool has_iso() const { return static_cast<bool>(iso); }
};

/// Handle to a countable functional graph on the naturals.
///
/// The evaluator is called lazily; results are memoized and a forward index
/// over an initial segment {0..k} is kept so that bounded preimage searches
/// cost one evaluation per element overall. Copies share the memo. The memo
/// is internally synchronized, so a handle can be used from several threads.
class Structure {
 public:
  Structure(std::string label, Evaluator eval,
            std::optional<OracleSet> oracles = std::nullopt)
      : state_(std::make_shared<State>(std::move(eval))),
        label_(std::move(label)),
        oracles_(std::move(oracles)) {}

  const std::string& label() const { return label_; }
  const std::optional<OracleSet>& oracles() const { return oracles_; }

  bool has_beta() const { return oracles_ && oracles_->has_beta(); }
  bool has_iso() const { return oracles_ && oracles_->has_iso(); }

  int oracle_beta(Element x) const {
    if (!has_beta()) throw MissingOracle(label_ + ": no branching oracle");
    const int b = oracles_->beta(x);
    if (b != 1 && b != 2) {
      throw OracleViolation(label_ + ": branching oracle returned " +
                            std::to_string(b) + " at " + std::to_string(x));
    }
    return b;
  }

  int oracle_iso(Element x) const {
    if (!has_iso()) throw MissingOracle(label_ + ": no branch isomorphism oracle");
    if (has_beta() && oracles_->beta(x) != 2) {
      throw OracleViolation(label_ + ": iso queried outside the split hair set at " +
                            std::to_string(x));
    }
    const int v = oracles_->iso(x);
    if (v != 0 && v != 1) {
      throw OracleViolation(label_ + ": iso oracle returned " + std::to_string(v));
    }
    return v;
  }

  Element apply(Element x) const {
    State& st = *state_;
    {
      std::lock_guard lock(st.mu);
      if (x < st.forward.size()) return st.forward[x];
      if (auto it = st.memo.find(x); it != st.memo.end()) return it->second;
    }
    const Element y = st.eval(x);
    std::lock_guard lock(st.mu);
    st.memo.emplace(x, y);
    st.note_explored(x);
    return y;
  }

  Element iterate(Element x, std::uint64_t n) const {
    for (std::uint64_t i = 0; i < n; ++i) x = apply(x);
    return x;
  }

  /// All y <= bound with apply(y) == x, ascending.
  std::vector<Element> preimages_upto(Element x, Element bound) const {
    State& st = *state_;
    extend_index(bound);
    std::lock_guard lock(st.mu);
    std::vector<Element> out;
    if (auto it = st.inverse.find(x); it != st.inverse.end()) {
      for (Element y : it->second) {
        if (y > bound) break;
        out.push_back(y);
      }
    }
    return out;
  }

  /// Largest input ever evaluated; nullopt before the first evaluation.
  std::optional<Element> explored_bound() const {
    std::lock_guard lock(state_->mu);
    if (!state_->any) return std::nullopt;
    return state_->explored;
  }

  std::size_t memo_size() const {
    std::lock_guard lock(state_->mu);
    return state_->memo.size() + state_->forward.size();
  }

  /// Re-evaluates every memoized pair and reports whether all agree.
  bool memo_consistent() const {
    std::vector<std::pair<Element, Element>> snapshot;
    {
      std::lock_guard lock(state_->mu);
      snapshot.assign(state_->memo.begin(), state_->memo.end());
      for (Element i = 0; i < state_->forward.size(); ++i)
        snapshot.emplace_back(i, state_->forward[i]);
    }
    return std::all_of(snapshot.begin(), snapshot.end(),
                       [&](const auto& p) { return state_->eval(p.first) == p.second; });
  }

 private:
  struct State {
    explicit State(Evaluator e) : eval(std::move(e)) {}
    Evaluator eval;
    std::mutex mu;
    std::mutex index_mu;
    std::unordered_map<Element, Element> memo;
    std::vector<Element> forward;  // forward[y] = f(y) for y < forward.size()
    std::unordered_map<Element, std::vector<Element>> inverse;
    Element explored = 0;
    bool any = false;

    void note_explored(Element x) {
      if (!any || x > explored) explored = x;
      any = true;
    }
  };

  void extend_index(Element bound) const {
    State& st = *state_;
    std::lock_guard index_lock(st.index_mu);
    Element next;
    {
      std::lock_guard lock(st.mu);
      next = st.forward.size();
    }
    if (next > bound) return;
    std::vector<Element> batch;
    batch.reserve(bound - next + 1);
    for (Element y = next; y <= bound; ++y) {
      Element v;
      bool hit = false;
      {
        std::lock_guard lock(st.mu);
        if (auto it = st.memo.find(y); it != st.memo.end()) {
          v = it->second;
          hit = true;
        }
      }
      if (!hit) v = st.eval(y);
      batch.push_back(v);
    }
    std::lock_guard lock(st.mu);
    for (Element i = 0; i < batch.size(); ++i) {
      const Element y = next + i;
      st.forward.push_back(batch[i]);
      st.inverse[batch[i]].push_back(y);
      st.memo.erase(y);
    }
    st.note_explored(bound);
  }

  std::shared_ptr<State> state_;
  std::string label_;
  std::optional<OracleSet> oracles_;
};

}  // namespace twoone
