#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "zzcm/lattice.hpp"
#include "zzcm/operator_core.hpp"

namespace zzcm {

/// One schedule step: H(t) on local time [0, duration], resolved at `period`/steps_per_period.
struct ScheduleStep {
  HamiltonianFn hamiltonian;
  double duration;
  double period;  // fastest timescale of the step
};

/// Ordered sequence of Hamiltonians applied back to back on one register.
class Schedule {
 public:
  explicit Schedule(RegisterPtr reg) : reg_(std::move(reg)) {
    if (!reg_) throw Error("Schedule: null register");
  }

  Schedule& add_step(HamiltonianFn h, double duration, double period) {
    require_same_register(reg_, h.reg(), "Schedule::add_step");
    if (!(duration > 0)) throw Error("Schedule: step duration must be positive");
    if (!(period > 0)) throw Error("Schedule: step period must be positive");
    const double end = h.support_end();
    if (duration > end * (1.0 + 1e-12))
      throw Error("Schedule: step duration exceeds the Hamiltonian support");
    steps_.push_back({std::move(h), duration, std::min(period, duration)});
    return *this;
  }

  [[nodiscard]] const RegisterPtr& reg() const { return reg_; }
  [[nodiscard]] const std::vector<ScheduleStep>& steps() const { return steps_; }
  [[nodiscard]] double total_time() const {
    double t = 0.0;
    for (const auto& s : steps_) t += s.duration;
    return t;
  }

 private:
  RegisterPtr reg_;
  std::vector<ScheduleStep> steps_;
};

struct PropagatorConfig {
  int steps_per_period = 256;
  double tolerance = 1e-8;  // on 1 − F(U_Δt, U_Δt/2)
  int max_refinements = 2;

  void validate() const {
    if (steps_per_period < 16) throw Error("PropagatorConfig: steps_per_period must be >= 16");
    if (!(tolerance > 0)) throw Error("PropagatorConfig: tolerance must be positive");
    if (max_refinements < 0) throw Error("PropagatorConfig: max_refinements must be >= 0");
  }
};

namespace detail {

// Union-find over basis indices.
class Partition {
 public:
  explicit Partition(Eigen::Index d) : parent_(static_cast<std::size_t>(d)) {
    for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<Eigen::Index>(i);
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void join(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  [[nodiscard]] std::vector<std::vector<Eigen::Index>> blocks() {
    const auto d = static_cast<Eigen::Index>(parent_.size());
    std::vector<std::vector<Eigen::Index>> out;
    std::vector<Eigen::Index> slot(parent_.size(), -1);
    for (Eigen::Index i = 0; i < d; ++i) {
      auto& s = slot[static_cast<std::size_t>(find(i))];
      if (s < 0) {
        s = static_cast<Eigen::Index>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(s)].push_back(i);
    }
    return out;
  }

 private:
  std::vector<Eigen::Index> parent_;
};

/**
 * U ← exp(−i H dt) U for a U that is block diagonal on `structure`.
 *
 * The nonzero pattern of H joined with U's blocks gives invariant subspaces on
 * which both are block diagonal, so each block is exponentiated and multiplied
 * on its own. `structure` is coarsened in place to the joined partition.
 */
inline void apply_step(Matrix& u, Partition& structure, const Matrix& h, double dt) {
  const Eigen::Index d = h.rows();
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = j + 1; i < d; ++i)
      if (h(i, j) != cplx{0.0, 0.0}) structure.join(i, j);
  for (const auto& idx : structure.blocks()) {
    const auto b = static_cast<Eigen::Index>(idx.size());
    if (b == 1) {
      const Eigen::Index i = idx.front();
      u(i, i) *= std::exp(cplx{0.0, -h(i, i).real() * dt});
      continue;
    }
    Matrix hb(b, b);
    Matrix ub(b, b);
    for (Eigen::Index c = 0; c < b; ++c)
      for (Eigen::Index r = 0; r < b; ++r) {
        const auto ri = idx[static_cast<std::size_t>(r)];
        const auto ci = idx[static_cast<std::size_t>(c)];
        hb(r, c) = h(ri, ci);
        ub(r, c) = u(ri, ci);
      }
    const Matrix updated = expm_hermitian_unchecked(hb, dt) * ub;
    for (Eigen::Index c = 0; c < b; ++c)
      for (Eigen::Index r = 0; r < b; ++r)
        u(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) = updated(r, c);
  }
}

inline Eigen::Index step_count(const ScheduleStep& s, int steps_per_period) {
  const double n = s.duration / s.period * steps_per_period;
  return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(n - 1e-9)));
}

}  // namespace detail

/// Single pass of the midpoint exponential product at a fixed resolution.
inline DenseOperator evolve_fixed(const Schedule& schedule, int steps_per_period) {
  const auto d = schedule.reg()->dim();
  Matrix u = Matrix::Identity(d, d);
  detail::Partition structure(d);
  for (const auto& step : schedule.steps()) {
    const Eigen::Index n = detail::step_count(step, steps_per_period);
    const double dt = step.duration / static_cast<double>(n);
    for (Eigen::Index m = 0; m < n; ++m) {
      const double t = (static_cast<double>(m) + 0.5) * dt;
      detail::apply_step(u, structure, step.hamiltonian.matrix_at(t), dt);
    }
  }
  return {schedule.reg(), std::move(u)};
}

/// Result of a converged propagation.
struct Evolution {
  DenseOperator unitary;         // finest resolution
  DenseOperator coarse_unitary;  // half the finest resolution
  double probe_difference;       // 1 − F(coarse, fine)
  int steps_per_period;          // resolution of `unitary`
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(DenseOperator coarse, DenseOperator fine, double difference, int steps_per_period)
      : Error("evolve: step-halving probe did not converge (1 - F = " + std::to_string(difference) +
              " at " + std::to_string(steps_per_period) + " steps per period)"),
        coarse_(std::move(coarse)),
        fine_(std::move(fine)),
        difference_(difference),
        steps_per_period_(steps_per_period) {}

  [[nodiscard]] const DenseOperator& coarse() const { return coarse_; }
  [[nodiscard]] const DenseOperator& fine() const { return fine_; }
  [[nodiscard]] double difference() const { return difference_; }
  [[nodiscard]] int steps_per_period() const { return steps_per_period_; }

 private:
  DenseOperator coarse_;
  DenseOperator fine_;
  double difference_;
  int steps_per_period_;
};

/**
 * Time-ordered propagator U ≈ Π exp(−i H(t_mid) Δt), Δt = period/steps_per_period.
 *
 * A convergence probe re-runs at half the step and compares the two unitaries
 * in the trace-fidelity metric. While the difference exceeds the tolerance the
 * resolution is doubled, at most `max_refinements` times; after that a
 * ConvergenceError carrying both estimates is thrown.
 */
inline Evolution evolve(const Schedule& schedule, const PropagatorConfig& config = {}) {
  config.validate();
  if (schedule.steps().empty()) return {DenseOperator::identity(schedule.reg()), DenseOperator::identity(schedule.reg()), 0.0, config.steps_per_period};
  int spp = config.steps_per_period;
  DenseOperator coarse = evolve_fixed(schedule, spp);
  DenseOperator fine = evolve_fixed(schedule, 2 * spp);
  double diff = 1.0 - trace_fidelity(fine, coarse);
  for (int r = 0; r < config.max_refinements && diff > config.tolerance; ++r) {
    spp *= 2;
    coarse = std::move(fine);
    fine = evolve_fixed(schedule, 2 * spp);
    diff = 1.0 - trace_fidelity(fine, coarse);
  }
  if (diff > config.tolerance) throw ConvergenceError(std::move(coarse), std::move(fine), diff, 2 * spp);
  return {std::move(fine), std::move(coarse), std::max(diff, 0.0), 2 * spp};
}

enum class GateLabel { HalfX, X, Y, Identity, Swap };

/// A gate acting on a set of sites (one site for single-qubit labels, two for Swap).
struct GateSpec {
  std::vector<Site> sites;
  GateLabel label;
};

/// exp(−iπσˣσˣ/4)·exp(−iπσʸσʸ/4) on two sites: the SWAP realized by two XY half pulses.
inline DenseOperator operational_swap(const RegisterPtr& reg, const Site& a, const Site& b) {
  const auto xx = product_term(reg, {{a, Axis::X}, {b, Axis::X}});
  const auto yy = product_term(reg, {{a, Axis::Y}, {b, Axis::Y}});
  return herm_expm(xx, std::numbers::pi / 4) * herm_expm(yy, std::numbers::pi / 4);
}

/// Tensor product of the listed gates with identity on every unlisted site.
inline DenseOperator ideal_gate(const RegisterPtr& reg, const std::vector<GateSpec>& gates) {
  std::vector<Site> used;
  for (const auto& g : gates)
    for (const auto& s : g.sites) {
      if (!reg->contains(s)) throw Error("ideal_gate: unknown site " + to_string(s));
      if (std::find(used.begin(), used.end(), s) != used.end())
        throw Error("ideal_gate: overlapping site sets at " + to_string(s));
      used.push_back(s);
    }
  DenseOperator u = DenseOperator::identity(reg);
  for (const auto& g : gates) {
    const bool single = g.label == GateLabel::HalfX || g.label == GateLabel::X || g.label == GateLabel::Y;
    if (single && g.sites.size() != 1) throw Error("ideal_gate: single-qubit gate needs exactly one site");
    if (g.label == GateLabel::Swap && g.sites.size() != 2) throw Error("ideal_gate: SWAP needs two sites");
    switch (g.label) {
      case GateLabel::HalfX: u = herm_expm(embed_pauli(reg, g.sites[0], Axis::X), std::numbers::pi / 4) * u; break;
      case GateLabel::X: u = herm_expm(embed_pauli(reg, g.sites[0], Axis::X), std::numbers::pi / 2) * u; break;
      case GateLabel::Y: u = herm_expm(embed_pauli(reg, g.sites[0], Axis::Y), std::numbers::pi / 2) * u; break;
      case GateLabel::Identity: break;
      case GateLabel::Swap: u = operational_swap(reg, g.sites[0], g.sites[1]) * u; break;
    }
  }
  return u;
}

struct GateFidelity {
  double fidelity;         // at the finest resolution
  double infidelity;       // 1 − fidelity
  double coarse_fidelity;  // at half the finest resolution
  double probe_difference;
  int steps_per_period;
};

/// trace_fidelity(ideal, evolve(schedule)); convergence errors propagate.
inline GateFidelity gate_fidelity(const Schedule& schedule, const DenseOperator& ideal, const PropagatorConfig& config = {}) {
  require_same_register(schedule.reg(), ideal.reg(), "gate_fidelity");
  const Evolution ev = evolve(schedule, config);
  const double f = trace_fidelity(ideal, ev.unitary);
  return {f, 1.0 - f, trace_fidelity(ideal, ev.coarse_unitary), ev.probe_difference, ev.steps_per_period};
}

}  // namespace zzcm
