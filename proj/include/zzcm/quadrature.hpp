#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "zzcm/operator_core.hpp"

namespace zzcm::quad {

namespace detail {

// Gauss–Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double error_norm(double v) { return std::abs(v); }
inline double error_norm(const Matrix& m) { return max_abs_entry(m); }

template <class T>
T zero_like(const T& sample) {
  if constexpr (std::is_arithmetic_v<T>) {
    return T{0};
  } else {
    return T::Zero(sample.rows(), sample.cols());
  }
}

template <class T, class F>
std::pair<T, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * kKronrod[7];
  T gauss = fc * kGauss[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * kKronrod[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kGauss[i / 2];
  }
  T result = kron * h;
  const double err = error_norm(T((kron - gauss) * h));
  return {std::move(result), err};
}

template <class T, class F>
T adaptive(F& f, double a, double b, double tol, int depth, int max_depth) {
  auto [value, err] = gk15<T>(f, a, b);
  if (err <= tol || depth >= max_depth || !(std::abs(b - a) > 1e-15 * (1.0 + std::abs(a))))
    return value;
  const double m = 0.5 * (a + b);
  T left = adaptive<T>(f, a, m, 0.5 * tol, depth + 1, max_depth);
  T right = adaptive<T>(f, m, b, 0.5 * tol, depth + 1, max_depth);
  return left + right;
}

}  // namespace detail

/**
 * Adaptive Gauss–Kronrod (7/15) integration of a scalar- or matrix-valued
 * function over [a, b]. `abs_tol` bounds the estimated absolute error (max
 * entry for matrices). The interval is pre-split into `initial_pieces` equal
 * panels, which helps with periodic integrands.
 */
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol, int initial_pieces = 1, int max_depth = 30) {
  using T = std::decay_t<decltype(f(a))>;
  if (initial_pieces < 1) initial_pieces = 1;
  const double width = (b - a) / initial_pieces;
  const double piece_tol = abs_tol / initial_pieces;
  T total = detail::zero_like(f(a));
  for (int i = 0; i < initial_pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_pieces) ? b : lo + width;
    total += detail::adaptive<T>(f, lo, hi, piece_tol, 0, max_depth);
  }
  return total;
}

}  // namespace zzcm::quad
