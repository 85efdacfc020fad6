#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zzcm/lattice.hpp"
#include "zzcm/operator_core.hpp"
#include "zzcm/pulse.hpp"
#include "zzcm/quadrature.hpp"

namespace zzcm {

namespace detail {

using Rot2 = Eigen::Matrix2cd;

inline Rot2 pauli2(Axis a) {
  Rot2 m;
  switch (a) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, cplx{0, -1}, cplx{0, 1}, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// M ← (R acting on `bit`) · M
inline void rotate_rows(Matrix& m, unsigned bit, const Rot2& r) {
  const Eigen::Index d = m.rows();
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    cplx* col = m.col(j).data();
    for (Eigen::Index i0 = 0; i0 < d; ++i0) {
      if (i0 & mask) continue;
      const Eigen::Index i1 = i0 | mask;
      const cplx a = col[i0];
      const cplx b = col[i1];
      col[i0] = r(0, 0) * a + r(0, 1) * b;
      col[i1] = r(1, 0) * a + r(1, 1) * b;
    }
  }
}

// M ← M · (Q acting on `bit`)
inline void rotate_cols(Matrix& m, unsigned bit, const Rot2& q) {
  const Eigen::Index d = m.cols();
  const Eigen::Index mask = Eigen::Index{1} << bit;
  for (Eigen::Index j0 = 0; j0 < d; ++j0) {
    if (j0 & mask) continue;
    const Eigen::Index j1 = j0 | mask;
    cplx* c0 = m.col(j0).data();
    cplx* c1 = m.col(j1).data();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const cplx a = c0[i];
      const cplx b = c1[i];
      c0[i] = a * q(0, 0) + b * q(1, 0);
      c1[i] = a * q(0, 1) + b * q(1, 1);
    }
  }
}

}  // namespace detail

/**
 * Frame operator 𝒜(t) = exp(−i θ(t) S) with θ(t) = (ωτ/π)sin²(πt/τ),
 * repeated k times over T = kτ.
 *
 * When S is a sum of single-site Paulis on distinct sites the frame factorizes
 * into 2×2 rotations, which is how every shipped scenario builds it; a general
 * Hermitian S falls back to eigendecomposition.
 */
class FrameGenerator {
 public:
  FrameGenerator(const RegisterPtr& reg, std::vector<PauliFactor> direction, PhaseProfile profile, int repetitions)
      : direction_(DenseOperator::zero(reg)), factors_(std::move(direction)), profile_(profile), k_(repetitions) {
    if (k_ < 1) throw Error("FrameGenerator: repetitions must be positive");
    if (factors_->empty()) throw Error("FrameGenerator: empty direction");
    for (std::size_t i = 0; i < factors_->size(); ++i)
      for (std::size_t j = i + 1; j < factors_->size(); ++j)
        if ((*factors_)[i].site == (*factors_)[j].site)
          throw Error("FrameGenerator: direction sites must be distinct");
    for (const auto& f : *factors_) direction_ += embed_pauli(reg, f.site, f.axis);
  }

  FrameGenerator(DenseOperator direction, PhaseProfile profile, int repetitions)
      : direction_(std::move(direction)), profile_(profile), k_(repetitions) {
    if (k_ < 1) throw Error("FrameGenerator: repetitions must be positive");
    if (!direction_.is_hermitian()) throw Error("FrameGenerator: direction must be Hermitian");
    spectral_ = Eigen::SelfAdjointEigenSolver<Matrix>(direction_.matrix());
  }

  [[nodiscard]] const RegisterPtr& reg() const { return direction_.reg(); }
  [[nodiscard]] const DenseOperator& direction() const { return direction_; }
  [[nodiscard]] const PhaseProfile& profile() const { return profile_; }
  [[nodiscard]] int repetitions() const { return k_; }
  [[nodiscard]] double period() const { return profile_.tau(); }
  [[nodiscard]] double total_time() const { return k_ * profile_.tau(); }
  [[nodiscard]] bool factorized() const { return factors_.has_value(); }
  [[nodiscard]] const std::optional<std::vector<PauliFactor>>& factors() const { return factors_; }

  /// 𝒜(t) as a raw matrix (no range check).
  [[nodiscard]] Matrix unitary_matrix(double t) const {
    const auto d = reg()->dim();
    Matrix u = Matrix::Identity(d, d);
    apply(u, t, Side::Left, false);
    return u;
  }

  /// 𝒜(t) X 𝒜†(t) when `inverse` is false, 𝒜†(t) X 𝒜(t) otherwise.
  [[nodiscard]] Matrix conjugate(Matrix x, double t, bool inverse) const {
    if (factors_) {
      apply(x, t, Side::Left, inverse);
      apply(x, t, Side::Right, !inverse);
      return x;
    }
    const Matrix a = unitary_matrix(t);
    return inverse ? Matrix(a.adjoint() * x * a) : Matrix(a * x * a.adjoint());
  }

 private:
  enum class Side { Left, Right };

  // Left: X ← R X with R = 𝒜 (or 𝒜† if dagger). Right: X ← X R.
  void apply(Matrix& x, double t, Side side, bool dagger) const {
    const double theta = profile_.theta(t);
    if (factors_) {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      for (const auto& f : *factors_) {
        // exp(∓iθσ) = cos θ I ∓ i sin θ σ
        detail::Rot2 r = c * detail::Rot2::Identity() +
                         cplx{0.0, dagger ? s : -s} * detail::pauli2(f.axis);
        const unsigned bit = reg()->bit(f.site);
        if (side == Side::Left) {
          detail::rotate_rows(x, bit, r);
        } else {
          detail::rotate_cols(x, bit, r);
        }
      }
      return;
    }
    const Eigen::VectorXcd phases =
        (spectral_.eigenvalues().cast<cplx>() * cplx{0.0, dagger ? theta : -theta}).array().exp().matrix();
    const Matrix r = spectral_.eigenvectors() * phases.asDiagonal() * spectral_.eigenvectors().adjoint();
    x = (side == Side::Left) ? Matrix(r * x) : Matrix(x * r);
  }

  DenseOperator direction_;
  std::optional<std::vector<PauliFactor>> factors_;
  Eigen::SelfAdjointEigenSolver<Matrix> spectral_;
  PhaseProfile profile_;
  int k_;
};

/// exp(−i θ(t) S) for 0 ≤ t ≤ T.
inline DenseOperator frame_unitary(const FrameGenerator& g, double t) {
  check_time(t, g.total_time(), "frame_unitary");
  return {g.reg(), g.unitary_matrix(t)};
}

/// Lab-frame correction i𝒜̇𝒜† = +θ̇(t)·S = ω sin(2πt/τ)·S, supported on [0, T].
inline TimeDependentHamiltonian correction_hamiltonian(const FrameGenerator& g) {
  TimeDependentHamiltonian h(g.reg(), g.total_time());
  h.add_term(g.profile().rate_envelope(), g.direction());
  return h;
}

/// H_𝒜(t) = 𝒜†(t)H(t)𝒜(t) + i𝒜̇†(t)𝒜(t), where i𝒜̇†𝒜 = −θ̇(t)·S.
inline HamiltonianFn to_frame(const FrameGenerator& g, const HamiltonianFn& h) {
  require_same_register(g.reg(), h.reg(), "to_frame");
  const double end = std::min(h.support_end(), g.total_time());
  return {g.reg(), end, [g, h](double t) -> Matrix {
            Matrix out = g.conjugate(h.matrix_at(t), t, true);
            out -= g.profile().rate(t) * g.direction().matrix();
            return out;
          }};
}

/// H(t) = 𝒜(t)H_frame(t)𝒜†(t) + i𝒜̇(t)𝒜†(t), where i𝒜̇𝒜† = +θ̇(t)·S.
inline HamiltonianFn from_frame(const FrameGenerator& g, const HamiltonianFn& h_frame) {
  require_same_register(g.reg(), h_frame.reg(), "from_frame");
  const double end = std::min(h_frame.support_end(), g.total_time());
  return {g.reg(), end, [g, h_frame](double t) -> Matrix {
            Matrix out = g.conjugate(h_frame.matrix_at(t), t, false);
            out += g.profile().rate(t) * g.direction().matrix();
            return out;
          }};
}

/// True when `op` commutes with the frame direction S (the frame then leaves it unchanged).
inline bool commutes_with_frame(const FrameGenerator& g, const Matrix& op, double tol = kHermitianTol) {
  const Matrix& s = g.direction().matrix();
  return max_abs_entry(s * op - op * s) <= tol;
}

/**
 * Lowest-order average Hamiltonian (1/τ)∫_{(n−1)τ}^{nτ} H_𝒜(t) dt over the
 * n-th frame period (1-based), by adaptive Gauss–Kronrod quadrature.
 */
inline DenseOperator average_hamiltonian(const FrameGenerator& g, const HamiltonianFn& h, int segment) {
  if (segment < 1 || segment > g.repetitions())
    throw Error("average_hamiltonian: segment index " + std::to_string(segment) + " outside [1, " +
                std::to_string(g.repetitions()) + "]");
  const HamiltonianFn framed = to_frame(g, h);
  const double tau = g.period();
  const double t0 = (segment - 1) * tau;
  const double t1 = segment * tau;
  auto f = [&framed](double t) { return framed.matrix_at(t); };
  Matrix avg = quad::integrate(f, t0, t1, 1e-10 * tau, 8) / tau;
  return {g.reg(), std::move(avg)};
}

}  // namespace zzcm
