#pragma once

// Closed-form structures used as fixtures and from structure spec files:
// the identity, a single Z-chain, "assembled" structures made of finitely
// many cycles with chosen exclusive-tree shapes, and conjugate (relabelled)
// copies of any structure.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twoone/error.hpp"
#include "twoone/structure.hpp"

namespace twoone {

inline Structure structure_identity() {
  OracleSet o;
  o.origin = OracleOrigin::ClosedForm;
  o.beta = [](Element) { return 1; };
  o.iso = [](Element) { return 0; };
  return Structure("identity", [](Element x) { return x; }, std::move(o));
}

/// One Z-chain: 2z encodes z >= 0 and 2|z|-1 encodes z < 0, f(z) = z + 1.
/// Every element has exactly one preimage and no forward orbit repeats.
inline Structure structure_zchain() {
  OracleSet o;
  o.origin = OracleOrigin::ClosedForm;
  o.beta = [](Element) { return 1; };
  o.iso = [](Element) { return 0; };
  return Structure("zchain",
                   [](Element x) -> Element {
                     if (x % 2 == 0) return x + 2;
                     return x == 1 ? 0 : x - 2;
                   },
                   std::move(o));
}

/// Shape of an infinite exclusive tree hanging off a node:
///   Empty  nothing attached;
///   Chain  a degenerate tree (every node one preimage);
///   Full   the complete binary tree;
///   Fork   one node with two attached shapes (neither Empty).
class Shape {
 public:
  enum class Kind { Empty, Chain, Full, Fork };

  static Shape empty() { return Shape(Kind::Empty); }
  static Shape chain() { return Shape(Kind::Chain); }
  static Shape full() { return Shape(Kind::Full); }
  static Shape fork(Shape a, Shape b) {
    if (a.kind() == Kind::Empty || b.kind() == Kind::Empty) {
      throw SpecError("fork branches must be non-empty shapes");
    }
    Shape s(Kind::Fork);
    s.left_ = std::make_shared<Shape>(std::move(a));
    s.right_ = std::make_shared<Shape>(std::move(b));
    return s;
  }

  Kind kind() const { return kind_; }
  const Shape& left() const { return *left_; }
  const Shape& right() const { return *right_; }

  /// Isomorphism-type key of the infinite tree: a fork of two full trees is
  /// itself full, and fork branches are unordered.
  std::string normal_form() const {
    switch (kind_) {
      case Kind::Empty: return "E";
      case Kind::Chain: return "D";
      case Kind::Full: return "F";
      case Kind::Fork: {
        auto a = left_->normal_form(), b = right_->normal_form();
        if (a == "F" && b == "F") return "F";
        if (b < a) std::swap(a, b);
        return "(" + a + "|" + b + ")";
      }
    }
    return "?";
  }

 private:
  explicit Shape(Kind k) : kind_(k) {}
  Kind kind_;
  std::shared_ptr<Shape> left_, right_;
};

/// A structure with finitely many cycles. Cyclic elements come first
/// (cycle by cycle), then fork nodes, then the infinite chains and full
/// trees interleaved round-robin, so the domain is exactly the naturals.
class AssembledStructure {
 public:
  /// cycles[i] lists the shape attached to each element of the i-th cycle,
  /// in successor order.
  explicit AssembledStructure(std::vector<std::vector<Shape>> cycles) {
    for (const auto& cyc : cycles) {
      if (cyc.empty()) throw SpecError("assembled: empty cycle");
      const Element base = nodes_.size();
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        nodes_.push_back({base + (i + 1) % cyc.size(), 1, 0, true});
        cyclic_.push_back(base + i);
      }
    }
    std::size_t idx = 0;
    for (const auto& cyc : cycles) {
      for (const auto& shape : cyc) attach(shape, cyclic_[idx++]);
    }
    if (streams_.empty()) {
      throw SpecError("assembled: at least one chain or full tree is needed to cover the naturals");
    }
  }

  Element finite_count() const { return nodes_.size(); }
  const std::vector<Element>& cyclic_elements() const { return cyclic_; }
  /// Fork nodes in allocation order.
  const std::vector<Element>& fork_nodes() const { return forks_; }

  Element f(Element x) const {
    if (x < nodes_.size()) return nodes_[x].parent;
    const Element c = nodes_.size(), s = streams_.size();
    const Element j = (x - c) % s, i = (x - c) / s;
    const Stream& st = streams_[j];
    if (i == 0) return st.attach;
    const Element pi = st.kind == Shape::Kind::Chain ? i - 1 : (i - 1) / 2;
    return c + pi * s + j;
  }

  int beta(Element x) const {
    if (x < nodes_.size()) return nodes_[x].beta;
    const Element j = (x - nodes_.size()) % streams_.size();
    return streams_[j].kind == Shape::Kind::Full ? 2 : 1;
  }

  int iso(Element x) const {
    if (x < nodes_.size()) return nodes_[x].iso;
    return beta(x) == 2 ? 1 : 0;
  }

  Structure structure(std::string label = "assembled") const {
    auto self = std::make_shared<const AssembledStructure>(*this);
    OracleSet o;
    o.origin = OracleOrigin::ClosedForm;
    o.beta = [self](Element x) { return self->beta(x); };
    o.iso = [self](Element x) { return self->iso(x); };
    return Structure(std::move(label), [self](Element x) { return self->f(x); }, std::move(o));
  }

 private:
  struct Node {
    Element parent;
    int beta;
    int iso;
    bool cyclic;
  };
  struct Stream {
    Shape::Kind kind;
    Element attach;
  };

  void attach(const Shape& shape, Element at) {
    switch (shape.kind()) {
      case Shape::Kind::Empty: return;
      case Shape::Kind::Chain:
      case Shape::Kind::Full:
        streams_.push_back({shape.kind(), at});
        break;
      case Shape::Kind::Fork: {
        const Element h = nodes_.size();
        const bool twins = shape.left().normal_form() == shape.right().normal_form();
        nodes_.push_back({at, 2, twins ? 1 : 0, false});
        forks_.push_back(h);
        attach(shape.left(), h);
        attach(shape.right(), h);
        break;
      }
    }
    if (nodes_[at].cyclic) {
      nodes_[at].beta = 2;
      nodes_[at].iso = 0;
    }
  }

  std::vector<Node> nodes_;
  std::vector<Element> cyclic_;
  std::vector<Element> forks_;
  std::vector<Stream> streams_;
};

/// A permutation of {0..n}, identity beyond n.
class Relabeling {
 public:
  explicit Relabeling(std::vector<Element> perm) : fwd_(std::move(perm)), inv_(fwd_.size()) {
    std::vector<bool> seen(fwd_.size(), false);
    for (Element i = 0; i < fwd_.size(); ++i) {
      if (fwd_[i] >= fwd_.size() || seen[fwd_[i]]) {
        throw SpecError("relabeling is not a permutation of 0.." + std::to_string(fwd_.size() - 1));
      }
      seen[fwd_[i]] = true;
      inv_[fwd_[i]] = i;
    }
  }

  /// Fisher-Yates over {0..n} driven by mt19937_64 (portable output).
  static Relabeling random(Element n, std::uint64_t seed) {
    std::vector<Element> p(n + 1);
    for (Element i = 0; i <= n; ++i) p[i] = i;
    std::mt19937_64 rng(seed);
    for (Element i = n; i > 0; --i) std::swap(p[i], p[rng() % (i + 1)]);
    return Relabeling(std::move(p));
  }

  static Relabeling shift(Element n, Element by) {
    std::vector<Element> p(n + 1);
    for (Element i = 0; i <= n; ++i) p[i] = (i + by) % (n + 1);
    return Relabeling(std::move(p));
  }

  Element operator()(Element x) const { return x < fwd_.size() ? fwd_[x] : x; }
  Element inverse(Element x) const { return x < inv_.size() ? inv_[x] : x; }
  const std::vector<Element>& forward() const { return fwd_; }

 private:
  std::vector<Element> fwd_, inv_;
};

/// B = pi o f o pi^-1. Oracles are carried over when `with_oracles`.
inline Structure conjugate(const Structure& base, const Relabeling& pi, bool with_oracles,
                           std::string label = {}) {
  auto p = std::make_shared<const Relabeling>(pi);
  if (label.empty()) label = base.label() + "~";
  Evaluator eval = [base, p](Element x) { return (*p)(base.apply(p->inverse(x))); };
  if (!with_oracles || !base.oracles()) return Structure(std::move(label), std::move(eval));
  OracleSet o;
  o.origin = base.oracles()->origin;
  if (base.has_beta()) o.beta = [base, p](Element x) { return base.oracles()->beta(p->inverse(x)); };
  if (base.has_iso()) o.iso = [base, p](Element x) { return base.oracles()->iso(p->inverse(x)); };
  return Structure(std::move(label), std::move(eval), std::move(o));
}

/// Same function, oracles dropped.
inline Structure without_oracles(const Structure& s) {
  return Structure(s.label(), [s](Element x) { return s.apply(x); });
}

}  // namespace twoone
