#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "zzcm/operator_core.hpp"
#include "zzcm/pulse.hpp"
#include "zzcm/quadrature.hpp"
#include "zzcm/thread_pool.hpp"

namespace zzcm {

/**
 * Parameters of the per-period error cumulant. The base pulse Ω₀sin²(πt/T)
 * has area a = Ω₀T/2, the frame period is τ = T/k and the modulation
 * amplitude is ω = γ·k·Ω₀.
 */
struct CumulantSpec {
  double area = std::numbers::pi / 4;
  int k = 1;
  double gamma = 0.0;
  double eta = 1.0;
  double omega0 = 1.0;

  [[nodiscard]] double gate_time() const { return 2.0 * area / omega0; }
  [[nodiscard]] double tau() const { return gate_time() / k; }
  [[nodiscard]] double omega() const { return gamma * k * omega0; }

  void validate() const {
    if (!(area > 0)) throw Error("CumulantSpec: area must be positive");
    if (k < 1) throw Error("CumulantSpec: k must be positive");
    if (!(omega0 > 0)) throw Error("CumulantSpec: omega0 must be positive");
  }
};

/// The two period integrals ∫cos χ dt and ∫sin χ dt, χ(t) = (2ωτ/π)sin²(πt/τ).
struct CumulantIntegrals {
  double cos_part;
  double sin_part;
};

inline CumulantIntegrals cumulant_integrals(const CumulantSpec& spec, int segment = 1) {
  spec.validate();
  if (segment < 1) throw Error("cumulant_integrals: segment index must be >= 1");
  const double tau = spec.tau();
  const double amp = 2.0 * spec.omega() * tau / std::numbers::pi;
  const double t0 = (segment - 1) * tau;
  auto chi = [&](double t) {
    const double s = std::sin(std::numbers::pi * t / tau);
    return amp * s * s;
  };
  // Panel count grows with the phase excursion so the oscillation is resolved.
  const int pieces = 4 + static_cast<int>(std::ceil(std::abs(amp) / std::numbers::pi));
  const double tol = 1e-13 * tau;
  const double c = quad::integrate([&](double t) { return std::cos(chi(t)); }, t0, t0 + tau, tol, pieces);
  const double s = quad::integrate([&](double t) { return std::sin(chi(t)); }, t0, t0 + tau, tol, pieces);
  return {c, s};
}

/// EC = η·(|∫cos χ dt| + |∫sin χ dt|) over one frame period.
inline double error_cumulant(const CumulantSpec& spec, int segment = 1) {
  const auto [c, s] = cumulant_integrals(spec, segment);
  return std::abs(spec.eta) * (std::abs(c) + std::abs(s));
}

struct GammaSearch {
  double lo = 0.1;
  double hi = 10.0;
  double scan_step = 0.01;
  double threshold = 1e-9;  // relative to η·τ
  int root_index = 1;       // 1 = smallest positive root
};

struct GammaResult {
  double gamma;
  double ec_relative;  // EC / (η τ) at gamma
};

class GammaNotFound : public Error {
 public:
  GammaNotFound(double gamma_at_min, double min_value)
      : Error("find_gamma: no error-cumulant zero in bracket; scanned minimum EC/(eta*tau) = " +
              std::to_string(min_value) + " at gamma = " + std::to_string(gamma_at_min)),
        gamma_at_min_(gamma_at_min),
        min_value_(min_value) {}
  [[nodiscard]] double gamma_at_min() const { return gamma_at_min_; }
  [[nodiscard]] double min_value() const { return min_value_; }

 private:
  double gamma_at_min_;
  double min_value_;
};

/// (γ, EC/(ητ)) samples of the error cumulant on the scan grid.
inline std::vector<std::pair<double, double>> cumulant_curve(double area, int k, const GammaSearch& search) {
  if (!(search.lo < search.hi)) throw Error("cumulant_curve: bracket must satisfy lo < hi");
  if (!(search.scan_step > 0)) throw Error("cumulant_curve: scan step must be positive");
  std::vector<std::pair<double, double>> out;
  const auto n = static_cast<std::size_t>(std::floor((search.hi - search.lo) / search.scan_step + 1e-9));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    CumulantSpec spec{area, k, search.lo + static_cast<double>(i) * search.scan_step, 1.0, 1.0};
    out.emplace_back(spec.gamma, error_cumulant(spec) / spec.tau());
  }
  return out;
}

/**
 * Modulation ratio γ* zeroing the error cumulant. EC is a sum of absolute
 * values, so its zeros are touching minima: every local minimum of the coarse
 * scan is refined by golden-section search and accepted once EC/(ητ) falls
 * below the threshold. Returns the `root_index`-th accepted minimum.
 */
inline GammaResult find_gamma(double area, int k, const GammaSearch& search = {}) {
  if (search.root_index < 1) throw Error("find_gamma: root index must be >= 1");
  auto f = [&](double gamma) {
    CumulantSpec spec{area, k, gamma, 1.0, 1.0};
    return error_cumulant(spec) / spec.tau();
  };
  const auto curve = cumulant_curve(area, k, search);

  std::size_t imin = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].second < curve[imin].second) imin = i;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  int found = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const bool left_ok = i == 0 || curve[i].second <= curve[i - 1].second;
    const bool right_ok = i + 1 == curve.size() || curve[i].second <= curve[i + 1].second;
    if (!left_ok || !right_ok) continue;
    double a = curve[i == 0 ? 0 : i - 1].first;
    double b = curve[i + 1 == curve.size() ? i : i + 1].first;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-13) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = f(d);
      }
    }
    const double g = fc < fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < search.threshold && ++found == search.root_index) return {g, v};
  }
  throw GammaNotFound(curve[imin].first, curve[imin].second);
}

/**
 * Peak of the normalized modulated drive, M(k, γ) = max_s |sin²(πs) + γk·sin(2πks)|
 * for s ∈ [0, 1]. Capping the drive at Ω_m sets Ω₀ = Ω_m / M(k, γ).
 */
inline double peak_ratio(int k, double gamma) {
  if (k < 1) throw Error("peak_ratio: k must be positive");
  const Envelope shape = Envelope::sin_squared(1.0, 1.0) + Envelope::modulation(gamma * k, 1.0 / k);
  return max_abs(shape, 0.0, 1.0);
}

struct KSelection {
  int best_k;
  std::vector<std::pair<int, double>> worst_infidelity;  // per candidate, in input order
};

/**
 * Picks the k whose worst infidelity over the η grid is smallest.
 * `infidelity(k, eta_ratio)` must be pure; evaluations fan out over `workers`
 * threads and are merged in (k, η) order, ties resolved toward the earlier k.
 */
inline KSelection select_k(const std::vector<int>& k_candidates, const std::vector<double>& eta_grid,
                           const std::function<double(int, double)>& infidelity, unsigned workers = 1) {
  if (k_candidates.empty()) throw Error("select_k: empty candidate list");
  if (eta_grid.empty()) throw Error("select_k: empty eta grid");
  const std::size_t nk = k_candidates.size();
  const std::size_t ne = eta_grid.size();
  std::vector<double> values(nk * ne);
  parallel_for(nk * ne, workers, [&](std::size_t idx) {
    values[idx] = infidelity(k_candidates[idx / ne], eta_grid[idx % ne]);
  });
  KSelection out{k_candidates.front(), {}};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nk; ++i) {
    const double worst = *std::max_element(values.begin() + static_cast<std::ptrdiff_t>(i * ne),
                                           values.begin() + static_cast<std::ptrdiff_t>((i + 1) * ne));
    out.worst_infidelity.emplace_back(k_candidates[i], worst);
    if (worst < best) {
      best = worst;
      out.best_k = k_candidates[i];
    }
  }
  return out;
}

}  // namespace zzcm
