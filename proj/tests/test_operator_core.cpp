#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zzcm/operator_core.hpp"

using namespace zzcm;

namespace {

const std::vector<Site> kThree = {{0, 0}, {0, 1}, {1, 0}};

Matrix random_hermitian(Eigen::Index d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(QubitRegister, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(QubitRegister({{0, 0}, {0, 0}}), Error);
  EXPECT_THROW(QubitRegister({}), Error);
  EXPECT_THROW(make_register(std::vector<Site>(17, Site{0, 0})), Error);
}

TEST(QubitRegister, FirstLabelIsMostSignificant) {
  const auto reg = make_register(kThree);
  EXPECT_EQ(reg->dim(), 8);
  EXPECT_EQ(reg->bit({0, 0}), 2U);
  EXPECT_EQ(reg->bit({1, 0}), 0U);
  const Matrix z0 = embed_pauli(reg, {0, 0}, Axis::Z).matrix();
  for (int i = 0; i < 8; ++i) EXPECT_EQ(z0(i, i).real(), i < 4 ? 1.0 : -1.0);
}

TEST(EmbedPauli, MatchesKroneckerOracle) {
  const auto reg = make_register(kThree);
  for (const auto& site : kThree)
    for (auto [axis, name] : {std::pair{Axis::X, 'x'}, std::pair{Axis::Y, 'y'}, std::pair{Axis::Z, 'z'}}) {
      const Matrix ours = embed_pauli(reg, site, axis).matrix();
      EXPECT_EQ(oracle::max_abs_diff(ours, oracle::kron_string(kThree, {{site, name}})), 0.0);
    }
}

TEST(EmbedPauli, UnknownSiteThrows) {
  const auto reg = make_register(kThree);
  EXPECT_THROW(embed_pauli(reg, {5, 5}, Axis::X), Error);
}

TEST(ProductTerm, MatchesKroneckerOracle) {
  const auto reg = make_register(kThree);
  const Matrix ours = product_term(reg, {{{0, 0}, Axis::Y}, {{1, 0}, Axis::X}}).matrix();
  const auto ref = oracle::kron_string(kThree, {{{0, 0}, 'y'}, {{1, 0}, 'x'}});
  EXPECT_EQ(oracle::max_abs_diff(ours, ref), 0.0);
}

TEST(ProductTerm, RepeatedSiteThrowsAndEmptyIsIdentity) {
  const auto reg = make_register(kThree);
  EXPECT_THROW(product_term(reg, {{{0, 0}, Axis::Z}, {{0, 0}, Axis::Z}}), Error);
  EXPECT_EQ(max_abs_entry(product_term(reg, {}).matrix() - Matrix::Identity(8, 8)), 0.0);
}

TEST(DenseOperator, RegisterMismatchThrows) {
  const auto a = make_register(kThree);
  const auto b = make_register({{0, 0}, {0, 1}, {2, 2}});
  EXPECT_THROW(embed_pauli(a, {0, 0}, Axis::X) + embed_pauli(b, {0, 0}, Axis::X), Error);
  EXPECT_THROW(embed_pauli(a, {0, 0}, Axis::X) * embed_pauli(b, {0, 0}, Axis::X), Error);
  // equal label lists are the same register
  const auto a2 = make_register(kThree);
  EXPECT_NO_THROW(embed_pauli(a, {0, 0}, Axis::X) + embed_pauli(a2, {0, 0}, Axis::X));
}

TEST(HermExpm, RejectsNonHermitian) {
  const auto reg = make_register({{0, 0}});
  const DenseOperator m(reg, (Matrix(2, 2) << 0, 1, 0, 0).finished());
  EXPECT_THROW(herm_expm(m, 1.0), Error);
}

TEST(HermExpm, QuarterTurnIsMinusISigma) {
  const auto reg = make_register({{0, 0}});
  const Matrix u = herm_expm(embed_pauli(reg, {0, 0}, Axis::X), std::numbers::pi / 2).matrix();
  EXPECT_LT(oracle::max_abs_diff(u, cplx{0, -1} * oracle::pauli('x')), 1e-15);
}

TEST(HermExpm, MatchesPadeOracleOnRandomHermitian) {
  const auto reg = make_register(kThree);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const Matrix h = random_hermitian(8, seed);
    const Matrix u = herm_expm(DenseOperator(reg, h), 0.7).matrix();
    EXPECT_LT(oracle::max_abs_diff(u, oracle::expm(h, 0.7)), 1e-12);
    EXPECT_LT(unitarity_deviation(u), 1e-13);
  }
}

TEST(TraceFidelity, EqualsNormalizedTraceAndIgnoresGlobalPhase) {
  const auto reg = make_register(kThree);
  const DenseOperator u = herm_expm(DenseOperator(reg, random_hermitian(8, 3)), 1.0);
  const DenseOperator v = herm_expm(DenseOperator(reg, random_hermitian(8, 4)), 0.2);
  const double ref = std::abs((u.matrix().adjoint() * v.matrix()).trace()) / 8.0;
  EXPECT_NEAR(trace_fidelity(u, v), ref, 1e-14);
  EXPECT_NEAR(trace_fidelity(u, std::polar(1.0, 0.9) * u), 1.0, 1e-14);
  EXPECT_NEAR(trace_fidelity(u, u), 1.0, 1e-14);
}
