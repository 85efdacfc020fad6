#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zzcm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice coordinate Q_{row,col}.
struct Site {
  int row = 0;
  int col = 0;
  auto operator<=>(const Site&) const = default;
};

inline std::string to_string(const Site& s) {
  std::ostringstream os;
  os << "Q(" << s.row << "," << s.col << ")";
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Site& s) { return os << to_string(s); }

enum class Axis { X, Y, Z };

inline char axis_name(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/**
 * Ordered set of lattice sites forming an n-qubit register.
 *
 * Ordering is big-endian: the first label is the most significant bit of the
 * computational-basis index, i.e. operators are built as
 * op(label[0]) ⊗ op(label[1]) ⊗ ... ⊗ op(label[n-1]).
 */
class QubitRegister {
 public:
  explicit QubitRegister(std::vector<Site> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw Error("QubitRegister: at least one site is required");
    if (labels_.size() > 16) throw Error("QubitRegister: dense operators are limited to 16 qubits");
    std::vector<Site> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("QubitRegister: duplicate site label");
  }

  [[nodiscard]] std::size_t count() const { return labels_.size(); }
  [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << labels_.size(); }
  [[nodiscard]] const std::vector<Site>& labels() const { return labels_; }

  [[nodiscard]] bool contains(const Site& s) const {
    return std::find(labels_.begin(), labels_.end(), s) != labels_.end();
  }

  /// Position of `s` in the label list.
  [[nodiscard]] std::size_t position(const Site& s) const {
    auto it = std::find(labels_.begin(), labels_.end(), s);
    if (it == labels_.end()) throw Error("unknown site " + to_string(s) + " in register");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Bit index (counted from the least significant bit) of a site.
  [[nodiscard]] unsigned bit(const Site& s) const {
    return static_cast<unsigned>(labels_.size() - 1 - position(s));
  }

  bool operator==(const QubitRegister& other) const { return labels_ == other.labels_; }

 private:
  std::vector<Site> labels_;
};

using RegisterPtr = std::shared_ptr<const QubitRegister>;

inline RegisterPtr make_register(std::vector<Site> labels) {
  return std::make_shared<const QubitRegister>(std::move(labels));
}

inline bool same_register(const RegisterPtr& a, const RegisterPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_register(const RegisterPtr& a, const RegisterPtr& b, const char* what) {
  if (!same_register(a, b)) throw Error(std::string(what) + ": register mismatch");
}

inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const Matrix& m) { return max_abs_entry(m - m.adjoint()); }

inline double unitarity_deviation(const Matrix& u) {
  return max_abs_entry(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

/// Square complex matrix bound to a qubit register.
class DenseOperator {
 public:
  DenseOperator(RegisterPtr reg, Matrix m) : reg_(std::move(reg)), m_(std::move(m)) {
    if (!reg_) throw Error("DenseOperator: null register");
    if (m_.rows() != reg_->dim() || m_.cols() != reg_->dim())
      throw Error("DenseOperator: matrix size does not match register dimension");
  }

  static DenseOperator zero(RegisterPtr reg) {
    const auto d = reg->dim();
    return {std::move(reg), Matrix::Zero(d, d)};
  }

  static DenseOperator identity(RegisterPtr reg) {
    const auto d = reg->dim();
    return {std::move(reg), Matrix::Identity(d, d)};
  }

  [[nodiscard]] const RegisterPtr& reg() const { return reg_; }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }

  [[nodiscard]] DenseOperator adjoint() const { return {reg_, m_.adjoint()}; }
  [[nodiscard]] bool is_hermitian(double tol = kHermitianTol) const {
    return hermiticity_deviation(m_) <= tol;
  }
  [[nodiscard]] bool is_unitary(double tol = kUnitaryTol) const {
    return unitarity_deviation(m_) <= tol;
  }

  DenseOperator& operator+=(const DenseOperator& o) {
    require_same_register(reg_, o.reg_, "operator+");
    m_ += o.m_;
    return *this;
  }
  DenseOperator& operator-=(const DenseOperator& o) {
    require_same_register(reg_, o.reg_, "operator-");
    m_ -= o.m_;
    return *this;
  }
  DenseOperator& operator*=(cplx c) {
    m_ *= c;
    return *this;
  }

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(cplx c, DenseOperator a) { return a *= c; }
  friend DenseOperator operator*(DenseOperator a, cplx c) { return a *= c; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    require_same_register(a.reg_, b.reg_, "operator*");
    return {a.reg_, a.m_ * b.m_};
  }

 private:
  RegisterPtr reg_;
  Matrix m_;
};

/// Single-site Pauli factor of a product term.
struct PauliFactor {
  Site site;
  Axis axis;
};

namespace detail {

// Fills the Pauli string matrix column by column: each column has exactly one
// nonzero entry at row = col ^ flip_mask.
inline Matrix pauli_string(const QubitRegister& reg, const std::vector<PauliFactor>& factors) {
  const Eigen::Index d = reg.dim();
  std::size_t flip = 0;
  std::vector<std::pair<unsigned, Axis>> bits;
  bits.reserve(factors.size());
  for (const auto& f : factors) {
    const unsigned b = reg.bit(f.site);
    bits.emplace_back(b, f.axis);
    if (f.axis != Axis::Z) flip |= std::size_t{1} << b;
  }
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    cplx coeff{1.0, 0.0};
    for (const auto& [b, ax] : bits) {
      const bool one = ((static_cast<std::size_t>(c) >> b) & 1U) != 0;
      switch (ax) {
        case Axis::X: break;
        case Axis::Y: coeff *= one ? cplx{0.0, -1.0} : cplx{0.0, 1.0}; break;
        case Axis::Z: coeff *= one ? -1.0 : 1.0; break;
      }
    }
    const auto r = static_cast<Eigen::Index>(static_cast<std::size_t>(c) ^ flip);
    m(r, c) = coeff;
  }
  return m;
}

inline Matrix expm_hermitian_unchecked(const Matrix& h, double angle) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * cplx{0.0, -angle}).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// I ⊗ ... ⊗ σ^axis ⊗ ... ⊗ I with σ^axis at the position of `site`.
inline DenseOperator embed_pauli(const RegisterPtr& reg, const Site& site, Axis axis) {
  if (!reg->contains(site)) throw Error("embed_pauli: unknown site " + to_string(site));
  return {reg, detail::pauli_string(*reg, {{site, axis}})};
}

/// Product of single-site Paulis on distinct sites (coupling terms such as σᶻσᶻ).
inline DenseOperator product_term(const RegisterPtr& reg, const std::vector<PauliFactor>& factors) {
  if (factors.empty()) return DenseOperator::identity(reg);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!reg->contains(factors[i].site))
      throw Error("product_term: unknown site " + to_string(factors[i].site));
    for (std::size_t j = i + 1; j < factors.size(); ++j)
      if (factors[i].site == factors[j].site)
        throw Error("product_term: repeated site " + to_string(factors[i].site) +
                    " (ill-formed coupling term)");
  }
  return {reg, detail::pauli_string(*reg, factors)};
}

/// exp(-i · angle · H) for Hermitian H, by eigendecomposition.
inline DenseOperator herm_expm(const DenseOperator& h, double angle) {
  const double dev = hermiticity_deviation(h.matrix());
  if (dev > kHermitianTol)
    throw Error("herm_expm: operator is not Hermitian (deviation " + std::to_string(dev) + ")");
  return {h.reg(), detail::expm_hermitian_unchecked(h.matrix(), angle)};
}

/// |Tr(U_ideal† U_actual)| / |Tr(U_ideal† U_ideal)|.
inline double trace_fidelity(const DenseOperator& ideal, const DenseOperator& actual) {
  require_same_register(ideal.reg(), actual.reg(), "trace_fidelity");
  // Tr(A†B) = Σ conj(A_ij) B_ij
  const cplx overlap = ideal.matrix().conjugate().cwiseProduct(actual.matrix()).sum();
  const double norm = ideal.matrix().squaredNorm();
  return std::abs(overlap) / norm;
}

}  // namespace zzcm
