#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zzcm/operator_core.hpp"

namespace zzcm {

/**
 * Closed-form scalar function of time used for drive amplitudes, coupling
 * strengths and frame corrections. Amplitudes are angular frequencies.
 *
 *   SinSquared(A, T)  A·sin²(πt/T), supported on [0, T]
 *   Modulation(ω, τ)  ω·sin(2πt/τ), supported on [0, ∞)
 *   Constant(c)       c,            supported on [0, ∞)
 *   Sum, Scaled       linear combinations (support is the intersection)
 *
 * Envelopes are immutable and cheap to copy (shared node).
 */
class Envelope {
 public:
  struct SinSquared {
    double amplitude;
    double total_time;
  };
  struct Modulation {
    double amplitude;
    double period;
  };
  struct Constant {
    double value;
  };
  struct Sum {
    std::vector<Envelope> parts;
  };
  struct Scaled {
    double factor;
    std::vector<Envelope> inner;  // exactly one element
  };
  using Node = std::variant<SinSquared, Modulation, Constant, Sum, Scaled>;

  Envelope() : Envelope(Constant{0.0}) {}

  static Envelope sin_squared(double amplitude, double total_time) {
    if (!(total_time > 0)) throw Error("SinSquared envelope: total_time must be positive");
    return Envelope(SinSquared{amplitude, total_time});
  }
  static Envelope modulation(double amplitude, double period) {
    if (!(period > 0)) throw Error("Modulation envelope: period must be positive");
    return Envelope(Modulation{amplitude, period});
  }
  static Envelope constant(double value) { return Envelope(Constant{value}); }
  static Envelope sum(std::vector<Envelope> parts) { return Envelope(Sum{std::move(parts)}); }
  static Envelope scaled(double factor, Envelope inner) {
    return Envelope(Scaled{factor, {std::move(inner)}});
  }

  [[nodiscard]] const Node& node() const { return *node_; }

  /// Right end of the support interval [0, end]; infinity when unbounded.
  [[nodiscard]] double support_end() const {
    return std::visit(
        [](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, SinSquared>) {
            return n.total_time;
          } else if constexpr (std::is_same_v<N, Sum>) {
            double end = std::numeric_limits<double>::infinity();
            for (const auto& p : n.parts) end = std::min(end, p.support_end());
            return end;
          } else if constexpr (std::is_same_v<N, Scaled>) {
            return n.inner.front().support_end();
          } else {
            return std::numeric_limits<double>::infinity();
          }
        },
        *node_);
  }

  /// Shortest oscillation period among the components (infinity for constants).
  [[nodiscard]] double shortest_period() const {
    return std::visit(
        [](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, SinSquared>) {
            return n.total_time;
          } else if constexpr (std::is_same_v<N, Modulation>) {
            return n.period;
          } else if constexpr (std::is_same_v<N, Sum>) {
            double p = std::numeric_limits<double>::infinity();
            for (const auto& part : n.parts) p = std::min(p, part.shortest_period());
            return p;
          } else if constexpr (std::is_same_v<N, Scaled>) {
            return n.inner.front().shortest_period();
          } else {
            return std::numeric_limits<double>::infinity();
          }
        },
        *node_);
  }

  /// Pointwise value without support checking.
  [[nodiscard]] double value_unchecked(double t) const {
    using std::numbers::pi;
    return std::visit(
        [t](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, SinSquared>) {
            const double s = std::sin(pi * t / n.total_time);
            return n.amplitude * s * s;
          } else if constexpr (std::is_same_v<N, Modulation>) {
            return n.amplitude * std::sin(2.0 * pi * t / n.period);
          } else if constexpr (std::is_same_v<N, Constant>) {
            return n.value;
          } else if constexpr (std::is_same_v<N, Sum>) {
            double acc = 0.0;
            for (const auto& p : n.parts) acc += p.value_unchecked(t);
            return acc;
          } else {
            return n.factor * n.inner.front().value_unchecked(t);
          }
        },
        *node_);
  }

  /// Closed-form antiderivative F with F(0) = 0.
  [[nodiscard]] double antiderivative(double t) const {
    using std::numbers::pi;
    return std::visit(
        [t](const auto& n) -> double {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, SinSquared>) {
            // ∫ sin²(πs/T) ds = s/2 − T sin(2πs/T)/(4π)
            return n.amplitude * (0.5 * t - n.total_time * std::sin(2.0 * pi * t / n.total_time) / (4.0 * pi));
          } else if constexpr (std::is_same_v<N, Modulation>) {
            // ∫ sin(2πs/τ) ds = τ(1 − cos(2πt/τ))/(2π); written with sin² to avoid cancellation
            const double s = std::sin(pi * t / n.period);
            return n.amplitude * n.period * s * s / pi;
          } else if constexpr (std::is_same_v<N, Constant>) {
            return n.value * t;
          } else if constexpr (std::is_same_v<N, Sum>) {
            double acc = 0.0;
            for (const auto& p : n.parts) acc += p.antiderivative(t);
            return acc;
          } else {
            return n.factor * n.inner.front().antiderivative(t);
          }
        },
        *node_);
  }

  friend Envelope operator+(const Envelope& a, const Envelope& b) { return sum({a, b}); }
  friend Envelope operator*(double c, const Envelope& e) { return scaled(c, e); }

 private:
  explicit Envelope(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> node_;
};

namespace detail {

inline void check_support(const Envelope& env, double t, const char* what) {
  const double end = env.support_end();
  const double slack = std::isfinite(end) ? 1e-12 * std::max(1.0, end) : 0.0;
  if (!(t >= -slack) || t > end + slack)
    throw Error(std::string(what) + ": t = " + std::to_string(t) + " outside envelope support [0, " +
                std::to_string(end) + "]");
}

}  // namespace detail

/// Envelope value at t; t must lie in the envelope's support.
inline double eval(const Envelope& env, double t) {
  detail::check_support(env, t, "eval");
  return env.value_unchecked(t);
}

/// ∫_{t0}^{t1} env dt (closed form).
inline double area(const Envelope& env, double t0, double t1) {
  if (t0 > t1) throw Error("area: t0 must not exceed t1");
  detail::check_support(env, t0, "area");
  detail::check_support(env, t1, "area");
  return env.antiderivative(t1) - env.antiderivative(t0);
}

/**
 * max_{t ∈ [t0, t1]} |env(t)|: dense grid (4096 points per shortest period)
 * followed by golden-section refinement around every grid-local maximum that
 * comes within 1% of the best sample.
 */
inline double max_abs(const Envelope& env, double t0, double t1) {
  if (!(t0 < t1)) throw Error("max_abs: requires t0 < t1");
  detail::check_support(env, t0, "max_abs");
  detail::check_support(env, t1, "max_abs");
  const double period = std::min(env.shortest_period(), t1 - t0);
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / period * 4096.0));
  const double h = (t1 - t0) / static_cast<double>(n);
  auto f = [&env](double t) { return std::abs(env.value_unchecked(t)); };

  std::vector<double> samples(n + 1);
  for (std::size_t i = 0; i <= n; ++i) samples[i] = f(i == n ? t1 : t0 + static_cast<double>(i) * h);
  const double grid_best = *std::max_element(samples.begin(), samples.end());
  double best = grid_best;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool left_ok = i == 0 || samples[i] >= samples[i - 1];
    const bool right_ok = i == n || samples[i] >= samples[i + 1];
    if (!left_ok || !right_ok || samples[i] < 0.99 * grid_best) continue;
    double a = std::max(t0, t0 + (static_cast<double>(i) - 1.0) * h);
    double b = std::min(t1, t0 + (static_cast<double>(i) + 1.0) * h);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 100 && (b - a) > 1e-15 * (1.0 + std::abs(b)); ++it) {
      if (fc > fd) {
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
    best = std::max({best, fc, fd});
  }
  return best;
}

/**
 * Frame phase θ(t) = (ωτ/π)·sin²(πt/τ) with exact derivative
 * dθ/dt = ω·sin(2πt/τ). τ-periodic, θ(0) = θ(τ) = 0.
 */
class PhaseProfile {
 public:
  PhaseProfile(double omega, double tau) : omega_(omega), tau_(tau) {
    if (!(tau > 0)) throw Error("PhaseProfile: period must be positive");
  }

  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double tau() const { return tau_; }

  [[nodiscard]] double theta(double t) const {
    const double s = std::sin(std::numbers::pi * t / tau_);
    return omega_ * tau_ / std::numbers::pi * s * s;
  }

  [[nodiscard]] double rate(double t) const {
    return omega_ * std::sin(2.0 * std::numbers::pi * t / tau_);
  }

  /// dθ/dt as an envelope, for building correction Hamiltonians symbolically.
  [[nodiscard]] Envelope rate_envelope() const { return Envelope::modulation(omega_, tau_); }

 private:
  double omega_;
  double tau_;
};

/// Named waveform channel; consecutive entries are played back to back.
/// A named control line: consecutive segments of local-time samplers.
struct PulseChannel {
  using Sampler = std::function<double(double)>;

  std::string name;
  std::vector<std::pair<Sampler, double>> segments;  // (sampler on [0, duration], duration)

  static Sampler from(const Envelope& env) {
    return [env](double t) { return eval(env, t); };
  }
};

/**
 * Writes sampled waveforms as CSV: header `t,<channel>...`, one row per
 * sample at `rate` samples per unit time, including both end points.
 */
inline void write_waveform_csv(std::ostream& os, const std::vector<PulseChannel>& channels, double rate) {
  if (!(rate > 0)) throw Error("write_waveform_csv: sample rate must be positive");
  if (channels.empty()) throw Error("write_waveform_csv: no channels");
  double total = 0.0;
  for (const auto& seg : channels.front().segments) total += seg.second;
  const auto n = static_cast<std::size_t>(std::ceil(total * rate));

  os << "t";
  for (const auto& ch : channels) os << ',' << ch.name;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = (i == n) ? total : static_cast<double>(i) / rate;
    std::snprintf(buf, sizeof buf, "%.10g", t);
    os << buf;
    for (const auto& ch : channels) {
      double local = t;
      double value = 0.0;
      for (std::size_t s = 0; s < ch.segments.size(); ++s) {
        const auto& [sample, dur] = ch.segments[s];
        if (local <= dur || s + 1 == ch.segments.size()) {
          value = sample(std::min(local, dur));
          break;
        }
        local -= dur;
      }
      std::snprintf(buf, sizeof buf, ",%.12g", value);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace zzcm
