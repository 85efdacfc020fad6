#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zzcm/cumulant.hpp"
#include "zzcm/frame.hpp"
#include "zzcm/propagator.hpp"
#include "zzcm/scenario.hpp"

using namespace zzcm;
using std::numbers::pi;

namespace {

const Site q{0, 0};

FrameGenerator single_x(const RegisterPtr& reg, double omega, double tau, int k) {
  return FrameGenerator(reg, {{q, Axis::X}}, PhaseProfile(omega, tau), k);
}

// Random Hermitian H(t) = A + cos(3t)B + t²C on `reg`.
HamiltonianFn random_hamiltonian(const RegisterPtr& reg, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  auto herm = [&] {
    Matrix a(reg->dim(), reg->dim());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {g(rng), g(rng)};
    return Matrix(0.5 * (a + a.adjoint()));
  };
  const Matrix a = herm(), b = herm(), c = herm();
  return {reg, 10.0, [=](double t) -> Matrix { return a + std::cos(3 * t) * b + t * t * c; }};
}

}  // namespace

TEST(FrameUnitary, BoundaryAndPeriodicityForEveryScenarioFrame) {
  for (const char* name : {"s1", "s1b", "s2", "s2nn", "s3", "s4"}) {
    const Scenario sc = make_scenario(name, 4, AmplitudeMode::Capped);
    for (const auto& step : sc.steps()) {
      const FrameGenerator& g = *step.frame;
      const Matrix id = Matrix::Identity(g.reg()->dim(), g.reg()->dim());
      EXPECT_LE(max_abs_entry(frame_unitary(g, 0.0).matrix() - id), 1e-12) << name;
      EXPECT_LE(max_abs_entry(frame_unitary(g, g.total_time()).matrix() - id), 1e-12) << name;
      for (double s : {0.07, 0.31, 0.66}) {
        const double t = s * g.period();
        EXPECT_LE(max_abs_entry(frame_unitary(g, t).matrix() - frame_unitary(g, t + g.period()).matrix()), 1e-12)
            << name;
      }
    }
  }
}

TEST(FrameUnitary, HalfPeriodRotationAndRange) {
  const auto reg = make_register({q});
  const double omega = 3.0, tau = 0.5;
  const auto g = single_x(reg, omega, tau, 2);
  const double th = omega * tau / pi;
  const oracle::Mat ref = std::cos(th) * oracle::Mat::Identity(2, 2) - cplx{0, 1} * std::sin(th) * oracle::pauli('x');
  EXPECT_LT(oracle::max_abs_diff(frame_unitary(g, tau / 2).matrix(), ref), 1e-15);
  EXPECT_THROW(frame_unitary(g, 1.1), Error);
  EXPECT_THROW(frame_unitary(g, -0.1), Error);
}

TEST(FrameUnitary, FactorizedMatchesSpectralPath) {
  const auto reg = make_register({q, {0, 1}, {1, 0}});
  const std::vector<PauliFactor> f = {{q, Axis::X}, {{1, 0}, Axis::Y}};
  const PhaseProfile p(5.0, 0.4);
  const FrameGenerator fact(reg, f, p, 3);
  const FrameGenerator spec(product_term(reg, {{q, Axis::X}}) + product_term(reg, {{{1, 0}, Axis::Y}}), p, 3);
  ASSERT_TRUE(fact.factorized());
  ASSERT_FALSE(spec.factorized());
  for (double t : {0.05, 0.17, 0.9}) {
    EXPECT_LT(max_abs_entry(fact.unitary_matrix(t) - spec.unitary_matrix(t)), 1e-13);
    const Matrix x = Matrix::Random(8, 8);
    EXPECT_LT(max_abs_entry(fact.conjugate(x, t, false) - spec.conjugate(x, t, false)), 1e-13);
    EXPECT_LT(max_abs_entry(fact.conjugate(x, t, true) - spec.conjugate(x, t, true)), 1e-13);
  }
}

TEST(FrameGenerator, RejectsBadInput) {
  const auto reg = make_register({q, {0, 1}});
  EXPECT_THROW(FrameGenerator(reg, {{q, Axis::X}, {q, Axis::Y}}, PhaseProfile(1, 1), 1), Error);
  EXPECT_THROW(FrameGenerator(reg, {}, PhaseProfile(1, 1), 1), Error);
  EXPECT_THROW(FrameGenerator(reg, {{q, Axis::X}}, PhaseProfile(1, 1), 0), Error);
  const DenseOperator nonherm(reg, Matrix::Random(4, 4) * cplx{0, 1} + Matrix::Random(4, 4));
  EXPECT_THROW(FrameGenerator(nonherm, PhaseProfile(1, 1), 1), Error);
}

// Sign of the frame terms, fixed against finite differences of 𝒜(t).
TEST(FrameSigns, CorrectionIsIAdotAdaggerAndFrameTermIsIAdaggerDotA) {
  const auto reg = make_register({q, {0, 1}});
  const FrameGenerator g(reg, {{q, Axis::X}, {{0, 1}, Axis::Y}}, PhaseProfile(4.0, 0.6), 2);
  const HamiltonianFn zero = TimeDependentHamiltonian(reg);
  const auto corr = correction_hamiltonian(g);
  const auto framed_zero = to_frame(g, zero);
  const double h = 1e-6;
  for (double t : {0.05, 0.2, 0.47}) {
    const Matrix a = g.unitary_matrix(t);
    const Matrix adot = (g.unitary_matrix(t + h) - g.unitary_matrix(t - h)) / (2 * h);
    const Matrix i_adot_adag = cplx{0, 1} * adot * a.adjoint();
    const Matrix i_adagdot_a = cplx{0, 1} * adot.adjoint() * a;
    EXPECT_LT(max_abs_entry(evaluate(corr, t).matrix() - i_adot_adag), 1e-8);
    EXPECT_LT(max_abs_entry(framed_zero(t).matrix() - i_adagdot_a), 1e-8);
    EXPECT_LT(max_abs_entry(framed_zero(t).matrix() + g.profile().rate(t) * g.direction().matrix()), 1e-13);
  }
}

TEST(CorrectionHamiltonian, ZeroAtStartAndZeroMeanPerPeriod) {
  const auto reg = make_register({q});
  const auto g = single_x(reg, 19.2, 0.4, 4);
  const auto corr = correction_hamiltonian(g);
  EXPECT_EQ(max_abs_entry(evaluate(corr, 0.0).matrix()), 0.0);
  for (const auto& term : corr.terms()) EXPECT_NEAR(area(term.envelope, 0.4, 0.8), 0.0, 1e-14);
}

TEST(FromFrame, IsolatedGateReproducesModulatedDrive) {
  // from_frame(𝒜, Ω₀sin²(πt/T)σˣ) = [Ω₀sin²(πt/T) + ω·sin(2πt/τ)]σˣ, ω = γ*·k·Ω₀
  const Scenario sc = scenario_s1(4);
  const FrameGenerator& g = *sc.steps()[0].frame;
  const double T = sc.total_time();
  const double omega = 4.8097 * 4;
  const auto reg = sc.reg();
  const HamiltonianFn target = build_drive(reg, {{q, Envelope::sin_squared(1.0, T), 0.0}});
  const HamiltonianFn lab = from_frame(g, target);
  const HamiltonianFn catalog = sc.lab_hamiltonian(0, 0.0);
  const Matrix x = embed_pauli(reg, q, Axis::X).matrix();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, T);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const double w = std::pow(std::sin(pi * t / T), 2) + omega * std::sin(2 * pi * t / (T / 4));
    EXPECT_LT(max_abs_entry(lab(t).matrix() - w * x), 1e-3 * 4);  // 4.8097 is a rounded γ*
    EXPECT_LT(max_abs_entry(lab(t).matrix() - catalog(t).matrix()), 1e-12);
    EXPECT_LT(max_abs_entry(to_frame(g, catalog)(t).matrix() - target(t).matrix()), 1e-10);
  }
}

TEST(FrameMaps, IdentityFrameAndRoundTrip) {
  const auto reg = make_register({q, {0, 1}, {1, 1}});
  const HamiltonianFn h = random_hamiltonian(reg, 9);
  const FrameGenerator still(reg, {{q, Axis::X}}, PhaseProfile(0.0, 0.5), 4);
  const FrameGenerator g(reg, {{q, Axis::X}, {{1, 1}, Axis::Y}}, PhaseProfile(7.0, 0.5), 4);
  for (double t : {0.01, 0.33, 1.2, 1.97}) {
    EXPECT_LT(max_abs_entry(to_frame(still, h)(t).matrix() - h(t).matrix()), 1e-14);
    EXPECT_LT(max_abs_entry(from_frame(still, h)(t).matrix() - h(t).matrix()), 1e-14);
    EXPECT_LT(max_abs_entry(to_frame(g, from_frame(g, h))(t).matrix() - h(t).matrix()), 1e-10);
    EXPECT_LT(max_abs_entry(from_frame(g, to_frame(g, h))(t).matrix() - h(t).matrix()), 1e-10);
    EXPECT_LT(hermiticity_deviation(to_frame(g, h)(t).matrix()), 1e-12);
  }
  const auto other = make_register({q, {0, 1}, {2, 2}});
  EXPECT_THROW(to_frame(g, random_hamiltonian(other, 1)), Error);
}

TEST(AverageHamiltonian, DriveOnlyAndUnrotatedCrosstalk) {
  const Scenario sc = scenario_s1(4);
  const FrameGenerator& g = *sc.steps()[0].frame;
  const double T = sc.total_time(), tau = T / 4;
  const auto reg = sc.reg();
  const Matrix x = embed_pauli(reg, q, Axis::X).matrix();
  const HamiltonianFn lab0 = sc.lab_hamiltonian(0, 0.0);
  for (int n : {1, 3}) {
    const double mean = area(Envelope::sin_squared(1.0, T), (n - 1) * tau, n * tau) / tau;
    EXPECT_LT(max_abs_entry(average_hamiltonian(g, lab0, n).matrix() - mean * x), 1e-9);
  }
  EXPECT_THROW(average_hamiltonian(g, lab0, 0), Error);
  EXPECT_THROW(average_hamiltonian(g, lab0, 5), Error);

  const FrameGenerator still(reg, {{q, Axis::X}}, PhaseProfile(0.0, tau), 4);
  const TimeDependentHamiltonian zz = build_zz(reg, sc.zz_edges(0.1));
  EXPECT_LT(max_abs_entry(average_hamiltonian(still, zz, 2).matrix() - zz.matrix_at(0)), 1e-12);
}

TEST(AverageHamiltonian, CrosstalkCancelsAtOptimalGamma) {
  const Scenario sc = scenario_s1(4);
  const FrameGenerator& g = *sc.steps()[0].frame;
  const double eta = 0.1;
  const TimeDependentHamiltonian zz = build_zz(sc.reg(), sc.zz_edges(eta));
  for (int n = 1; n <= 4; ++n) EXPECT_LT(max_abs_entry(average_hamiltonian(g, zz, n).matrix()), 1e-6 * eta);
}

TEST(FrameEquivalence, LabEvolutionEqualsFrameEvolutionTimesFrameEnd) {
  // U_lab(T) = 𝒜(T)·U_frame(T), 𝒜(T) = I
  const Scenario sc = scenario_s1(4);
  const FrameGenerator& g = *sc.steps()[0].frame;
  const HamiltonianFn lab = sc.lab_hamiltonian(0, 0.2);
  const double T = sc.total_time();
  Schedule a(sc.reg()), b(sc.reg());
  a.add_step(lab, T, g.period());
  b.add_step(to_frame(g, lab), T, g.period());
  const DenseOperator ua = evolve(a).unitary;
  const DenseOperator ub = frame_unitary(g, T) * evolve(b).unitary;
  EXPECT_LE(1.0 - trace_fidelity(ua, ub), 1e-8);
}
