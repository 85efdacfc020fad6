#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "zzcm/operator_core.hpp"
#include "zzcm/pulse.hpp"

namespace zzcm {

/// Resonant single-qubit drive Ω(t)(cos φ σˣ + sin φ σʸ).
struct DriveTerm {
  Site site;
  Envelope envelope;
  double phase = 0.0;
};

/// XY exchange (J(t)/2)(σˣσˣ + σʸσʸ) between two sites.
struct XYEdge {
  Site a;
  Site b;
  Envelope coupling;
};

/// Static crosstalk η·σᶻσᶻ between two sites.
struct ZZEdge {
  Site a;
  Site b;
  double strength = 0.0;
};

/// Envelope-weighted operator term.
struct HamiltonianTerm {
  Envelope envelope;
  Matrix op;
};

/**
 * H(t) = Σ envelope_k(t)·op_k on a fixed register, supported on [0, support_end].
 */
class TimeDependentHamiltonian {
 public:
  explicit TimeDependentHamiltonian(RegisterPtr reg,
                                    double support_end = std::numeric_limits<double>::infinity())
      : reg_(std::move(reg)), support_end_(support_end) {
    if (!reg_) throw Error("TimeDependentHamiltonian: null register");
  }

  [[nodiscard]] const RegisterPtr& reg() const { return reg_; }
  [[nodiscard]] const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  /// Smallest support end over the container bound and all term envelopes.
  [[nodiscard]] double support_end() const {
    double end = support_end_;
    for (const auto& term : terms_) end = std::min(end, term.envelope.support_end());
    return end;
  }

  /// Shortest oscillation period among the term envelopes.
  [[nodiscard]] double shortest_period() const {
    double p = std::numeric_limits<double>::infinity();
    for (const auto& term : terms_) p = std::min(p, term.envelope.shortest_period());
    return p;
  }

  void add_term(Envelope env, const DenseOperator& op) {
    require_same_register(reg_, op.reg(), "TimeDependentHamiltonian::add_term");
    terms_.push_back({std::move(env), op.matrix()});
  }

  void restrict_support(double end) { support_end_ = std::min(support_end_, end); }

  /// H(t) as a raw matrix, without support checking.
  [[nodiscard]] Matrix matrix_at(double t) const {
    const auto d = reg_->dim();
    Matrix h = Matrix::Zero(d, d);
    for (const auto& term : terms_) {
      const double c = term.envelope.value_unchecked(t);
      if (c != 0.0) h += c * term.op;
    }
    return h;
  }

  TimeDependentHamiltonian& operator+=(const TimeDependentHamiltonian& other) {
    require_same_register(reg_, other.reg_, "TimeDependentHamiltonian::operator+");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    support_end_ = std::min(support_end_, other.support_end_);
    return *this;
  }

  friend TimeDependentHamiltonian operator+(TimeDependentHamiltonian a,
                                            const TimeDependentHamiltonian& b) {
    return a += b;
  }

 private:
  RegisterPtr reg_;
  double support_end_;
  std::vector<HamiltonianTerm> terms_;
};

inline void check_time(double t, double end, const char* what) {
  const double slack = std::isfinite(end) ? 1e-12 * std::max(1.0, end) : 0.0;
  if (!(t >= -slack) || t > end + slack)
    throw Error(std::string(what) + ": t = " + std::to_string(t) + " outside support [0, " +
                std::to_string(end) + "]");
}

/// Σ envelope(t)·operator at time t.
inline DenseOperator evaluate(const TimeDependentHamiltonian& h, double t) {
  check_time(t, h.support_end(), "evaluate");
  return {h.reg(), h.matrix_at(t)};
}

/**
 * Type-erased Hamiltonian callable t ↦ H(t) on [0, support_end]. Produced by
 * frame maps and consumed by the propagator; pure and safe to call
 * concurrently when the wrapped function is.
 */
class HamiltonianFn {
 public:
  using Fn = std::function<Matrix(double)>;

  HamiltonianFn(RegisterPtr reg, double support_end, Fn fn)
      : reg_(std::move(reg)), support_end_(support_end), fn_(std::move(fn)) {
    if (!reg_) throw Error("HamiltonianFn: null register");
  }

  // NOLINTNEXTLINE(google-explicit-constructor)
  HamiltonianFn(const TimeDependentHamiltonian& h)
      : reg_(h.reg()),
        support_end_(h.support_end()),
        fn_([h](double t) { return h.matrix_at(t); }) {}

  [[nodiscard]] const RegisterPtr& reg() const { return reg_; }
  [[nodiscard]] double support_end() const { return support_end_; }

  [[nodiscard]] Matrix matrix_at(double t) const { return fn_(t); }

  DenseOperator operator()(double t) const {
    check_time(t, support_end_, "HamiltonianFn");
    return {reg_, fn_(t)};
  }

  friend HamiltonianFn operator+(const HamiltonianFn& a, const HamiltonianFn& b) {
    require_same_register(a.reg_, b.reg_, "HamiltonianFn::operator+");
    return {a.reg_, std::min(a.support_end_, b.support_end_),
            [fa = a.fn_, fb = b.fn_](double t) -> Matrix { return fa(t) + fb(t); }};
  }

 private:
  RegisterPtr reg_;
  double support_end_;
  Fn fn_;
};

/// Σ Ω(t)(cos φ σˣ + sin φ σʸ); duplicate sites simply add.
inline TimeDependentHamiltonian build_drive(const RegisterPtr& reg, const std::vector<DriveTerm>& drives) {
  TimeDependentHamiltonian h(reg);
  for (const auto& d : drives) {
    if (!reg->contains(d.site)) throw Error("build_drive: unknown site " + to_string(d.site));
    // snap cos/sin of quarter-turn phases to exact zeros
    double c = std::cos(d.phase);
    double s = std::sin(d.phase);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    const DenseOperator op = c * embed_pauli(reg, d.site, Axis::X) + s * embed_pauli(reg, d.site, Axis::Y);
    h.add_term(d.envelope, op);
  }
  return h;
}

namespace detail {

template <class Edge>
void check_edges(const RegisterPtr& reg, const std::vector<Edge>& edges, const char* what) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (!reg->contains(e.a)) throw Error(std::string(what) + ": unknown site " + to_string(e.a));
    if (!reg->contains(e.b)) throw Error(std::string(what) + ": unknown site " + to_string(e.b));
    if (e.a == e.b) throw Error(std::string(what) + ": edge endpoints must differ");
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& f = edges[j];
      if ((e.a == f.a && e.b == f.b) || (e.a == f.b && e.b == f.a))
        throw Error(std::string(what) + ": duplicate edge " + to_string(e.a) + "-" + to_string(e.b));
    }
  }
}

}  // namespace detail

/// Σ η·σᶻσᶻ as a single static (diagonal) term.
inline TimeDependentHamiltonian build_zz(const RegisterPtr& reg, const std::vector<ZZEdge>& edges) {
  detail::check_edges(reg, edges, "build_zz");
  DenseOperator total = DenseOperator::zero(reg);
  for (const auto& e : edges)
    total += e.strength * product_term(reg, {{e.a, Axis::Z}, {e.b, Axis::Z}});
  TimeDependentHamiltonian h(reg);
  h.add_term(Envelope::constant(1.0), total);
  return h;
}

/// Σ (J(t)/2)(σˣσˣ + σʸσʸ).
inline TimeDependentHamiltonian build_xy(const RegisterPtr& reg, const std::vector<XYEdge>& edges) {
  detail::check_edges(reg, edges, "build_xy");
  TimeDependentHamiltonian h(reg);
  for (const auto& e : edges) {
    const DenseOperator op = 0.5 * (product_term(reg, {{e.a, Axis::X}, {e.b, Axis::X}}) +
                                    product_term(reg, {{e.a, Axis::Y}, {e.b, Axis::Y}}));
    h.add_term(e.coupling, op);
  }
  return h;
}

}  // namespace zzcm
