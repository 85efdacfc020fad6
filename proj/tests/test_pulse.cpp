#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "zzcm/pulse.hpp"
#include "zzcm/quadrature.hpp"

using namespace zzcm;
using std::numbers::pi;

TEST(Envelope, SinSquaredValuesAndSupport) {
  const Envelope e = Envelope::sin_squared(2.0, 4.0);
  EXPECT_DOUBLE_EQ(eval(e, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(eval(e, 2.0), 2.0);
  EXPECT_NEAR(eval(e, 1.0), 1.0, 1e-15);
  EXPECT_THROW(eval(e, 4.1), Error);
  EXPECT_THROW(eval(e, -0.1), Error);
  EXPECT_THROW(Envelope::sin_squared(1.0, 0.0), Error);
}

TEST(Envelope, ModulationAndSums) {
  const Envelope m = Envelope::modulation(3.0, 0.5);
  EXPECT_NEAR(eval(m, 0.125), 3.0, 1e-15);
  const Envelope s = Envelope::sin_squared(1.0, 2.0) + 0.5 * m;
  EXPECT_NEAR(eval(s, 0.125), std::pow(std::sin(pi * 0.125 / 2.0), 2) + 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(s.support_end(), 2.0);
  EXPECT_DOUBLE_EQ(s.shortest_period(), 0.5);
}

TEST(Envelope, ClosedFormAreaMatchesQuadrature) {
  const Envelope s = Envelope::sin_squared(1.3, 2.0) + Envelope::modulation(7.0, 0.5) + Envelope::constant(0.25);
  for (auto [a, b] : {std::pair{0.0, 2.0}, std::pair{0.1, 0.7}, std::pair{0.3, 1.9}}) {
    const double q = quad::integrate([&](double t) { return s.value_unchecked(t); }, a, b, 1e-14, 8);
    EXPECT_NEAR(area(s, a, b), q, 1e-12);
  }
  // sin² pulse of amplitude Ω over T has area ΩT/2
  EXPECT_NEAR(area(Envelope::sin_squared(1.0, pi / 2), 0.0, pi / 2), pi / 4, 1e-15);
  // the modulation integrates to zero over whole periods
  EXPECT_NEAR(area(Envelope::modulation(19.2, 0.25), 0.0, 1.0), 0.0, 1e-14);
}

TEST(Envelope, MaxAbsMatchesBruteForce) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> amp(1.0, 30.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double w = amp(rng);
    const int k = 1 + trial;
    const Envelope e = Envelope::sin_squared(1.0, 1.0) + Envelope::modulation(w, 1.0 / k);
    double brute = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i <= n; ++i) brute = std::max(brute, std::abs(e.value_unchecked(static_cast<double>(i) / n)));
    const double ours = max_abs(e, 0.0, 1.0);
    EXPECT_GE(ours, brute - 1e-12);
    EXPECT_NEAR(ours, brute, 1e-5);
  }
}

TEST(PhaseProfile, BoundaryPeriodicityAndRate) {
  const PhaseProfile p(9.6, 0.4);
  EXPECT_EQ(p.theta(0.0), 0.0);
  EXPECT_LT(std::abs(p.theta(0.4)), 1e-15);
  for (double t : {0.013, 0.17, 0.31}) {
    EXPECT_NEAR(p.theta(t + 0.4), p.theta(t), 1e-13);
    const double h = 1e-6;
    EXPECT_NEAR(p.rate(t), (p.theta(t + h) - p.theta(t - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(eval(p.rate_envelope(), t), p.rate(t), 1e-14);
  }
}

TEST(Quadrature, IntegratesOscillatoryFunctions) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 1e-14, 4),
              std::sin(40.0) / 40.0, 1e-13);
  EXPECT_NEAR(quad::integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0, 1e-14), std::sqrt(pi) * std::erf(3.0),
              1e-13);
}

TEST(Waveform, CsvLayoutAndRateValidation) {
  PulseChannel ch{"drive", {{PulseChannel::from(Envelope::sin_squared(1.0, 1.0)), 1.0}}};
  std::ostringstream os;
  write_waveform_csv(os, {ch}, 4.0);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("t,drive\n", 0), 0U);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 6);
  EXPECT_EQ(s.find('\r'), std::string::npos);
  EXPECT_NE(s.find("\n0.5,1\n"), std::string::npos);
  std::ostringstream bad;
  EXPECT_THROW(write_waveform_csv(bad, {ch}, 0.0), Error);
}
