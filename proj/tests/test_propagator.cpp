#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "zzcm/propagator.hpp"
#include "zzcm/scenario.hpp"

using namespace zzcm;
using std::numbers::pi;

namespace {
const Site q{0, 0};
const Site p{0, 1};
}  // namespace

TEST(Evolve, ZeroHamiltonianIsIdentity) {
  const auto reg = make_register({q, p});
  Schedule s(reg);
  s.add_step(TimeDependentHamiltonian(reg), 2.0, 1.0);
  const Evolution ev = evolve(s);
  EXPECT_EQ(max_abs_entry(ev.unitary.matrix() - Matrix::Identity(4, 4)), 0.0);
}

TEST(Evolve, CommutingDriveCollapsesToArea) {
  const auto reg = make_register({q});
  const double T = pi / 2;  // Ω₀ = 1, area π/4
  Schedule s(reg);
  s.add_step(build_drive(reg, {{q, Envelope::sin_squared(1.0, T), 0.0}}), T, T);
  const auto ideal = ideal_gate(reg, {{{q}, GateLabel::HalfX}});
  const GateFidelity f = gate_fidelity(s, ideal);
  EXPECT_GE(f.fidelity, 1 - 1e-10);
  EXPECT_LT(oracle::max_abs_diff(ideal.matrix(), oracle::expm(oracle::pauli('x'), pi / 4)), 1e-15);
}

TEST(Evolve, IsolatedGateExactWithoutCrosstalk) {
  const Scenario sc = scenario_s1(4);
  const Evolution ev = evolve(sc.schedule(0.0));
  EXPECT_GE(trace_fidelity(sc.ideal(), ev.unitary), 1 - 1e-10);
  EXPECT_LE(unitarity_deviation(ev.unitary.matrix()), 1e-10);
}

TEST(Evolve, StepHalvingProbeConverges) {
  const Scenario sc = scenario_s1(4);
  const Evolution ev = evolve(sc.schedule(0.3));
  EXPECT_LE(ev.probe_difference, 1e-8);
  EXPECT_EQ(ev.steps_per_period, 512);
}

TEST(Evolve, NonConvergenceCarriesBothEstimates) {
  const Scenario sc = scenario_s1(4);
  PropagatorConfig cfg{16, 1e-30, 1};
  try {
    evolve(sc.schedule(0.3), cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.difference(), 1e-30);
    EXPECT_EQ(e.steps_per_period(), 64);
    EXPECT_LE(unitarity_deviation(e.coarse().matrix()), 1e-10);
    EXPECT_LE(unitarity_deviation(e.fine().matrix()), 1e-10);
  }
  EXPECT_THROW(evolve(sc.schedule(0.0), PropagatorConfig{8}), Error);
}

TEST(Evolve, ExchangeConservesExcitationNumber) {
  const auto reg = make_register({q, p, {1, 0}});
  const double T = pi;
  Schedule s(reg);
  s.add_step(build_xy(reg, {{q, p, Envelope::sin_squared(1.0, T)}, {q, {1, 0}, Envelope::sin_squared(0.6, T)}}), T, T);
  const Matrix u = evolve(s).unitary.matrix();
  Matrix n = Matrix::Zero(8, 8);
  for (const auto& site : reg->labels()) n += embed_pauli(reg, site, Axis::Z).matrix();
  EXPECT_LT(max_abs_entry(u * n - n * u), 1e-8);
}

TEST(Schedule, ValidatesSteps) {
  const auto reg = make_register({q});
  const auto other = make_register({p});
  Schedule s(reg);
  EXPECT_THROW(s.add_step(TimeDependentHamiltonian(reg), 0.0, 1.0), Error);
  EXPECT_THROW(s.add_step(TimeDependentHamiltonian(other), 1.0, 1.0), Error);
  EXPECT_THROW(s.add_step(build_drive(reg, {{q, Envelope::sin_squared(1.0, 1.0), 0.0}}), 2.0, 1.0), Error);
}

TEST(IdealGate, IdentityAndSingleQubitLabels) {
  const auto reg = make_register({q, p});
  EXPECT_EQ(max_abs_entry(ideal_gate(reg, {{{q}, GateLabel::Identity}}).matrix() - Matrix::Identity(4, 4)), 0.0);
  const auto one = make_register({q});
  EXPECT_LT(oracle::max_abs_diff(ideal_gate(one, {{{q}, GateLabel::X}}).matrix(), cplx{0, -1} * oracle::pauli('x')),
            1e-15);
  EXPECT_LT(oracle::max_abs_diff(ideal_gate(one, {{{q}, GateLabel::Y}}).matrix(), cplx{0, -1} * oracle::pauli('y')),
            1e-15);
  EXPECT_THROW(ideal_gate(reg, {{{q}, GateLabel::X}, {{q, p}, GateLabel::Swap}}), Error);
  EXPECT_THROW(ideal_gate(reg, {{{q, p}, GateLabel::X}}), Error);
  EXPECT_THROW(ideal_gate(reg, {{{{3, 3}}, GateLabel::X}}), Error);
}

TEST(IdealGate, OperationalSwapMatchesFourByFourProduct) {
  const auto reg = make_register({q, p});
  const oracle::Mat xx = oracle::kron_string(reg->labels(), {{q, 'x'}, {p, 'x'}});
  const oracle::Mat yy = oracle::kron_string(reg->labels(), {{q, 'y'}, {p, 'y'}});
  const oracle::Mat ref = oracle::expm(xx, pi / 4) * oracle::expm(yy, pi / 4);
  const Matrix us = ideal_gate(reg, {{{q, p}, GateLabel::Swap}}).matrix();
  EXPECT_LT(oracle::max_abs_diff(us, ref), 1e-14);
  // |01⟩ → |10⟩ up to phase
  EXPECT_NEAR(std::abs(us(2, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(us(1, 2)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(us(0, 0)), 1.0, 1e-14);
}

TEST(IdealGate, TwoStepExchangeCompositionIsOperationalSwap) {
  // Frame steps with XY coupling only (no spectator drives), zero crosstalk:
  // exp(−iπσʸσʸ/4)·exp(−iπσˣσˣ/4) on the pair, identity elsewhere.
  const Scenario s3 = scenario_s3(4);
  const auto reg = s3.reg();
  Schedule s(reg);
  for (const auto& step : s3.steps()) {
    TimeDependentHamiltonian h = build_xy(reg, step.couplings) + correction_hamiltonian(*step.frame);
    h.restrict_support(step.duration);
    s.add_step(h, step.duration, step.period);
  }
  const oracle::Mat xx = oracle::kron_string(reg->labels(), {{q, 'x'}, {p, 'x'}});
  const oracle::Mat yy = oracle::kron_string(reg->labels(), {{q, 'y'}, {p, 'y'}});
  const DenseOperator ref(reg, oracle::expm(yy, pi / 4) * oracle::expm(xx, pi / 4));
  const GateFidelity f = gate_fidelity(s, ref);
  EXPECT_GE(f.fidelity, 1 - 1e-6) << "1 - F = " << 1 - f.fidelity;
  EXPECT_GE(trace_fidelity(ideal_gate(reg, {{{q, p}, GateLabel::Swap}}), ref), 1 - 1e-12);
}
