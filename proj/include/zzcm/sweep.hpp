#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "zzcm/propagator.hpp"
#include "zzcm/scenario.hpp"
#include "zzcm/thread_pool.hpp"

namespace zzcm {

struct SweepRecord {
  std::string scenario;
  int k;  // 0 for dynamical baselines
  double eta_ratio;
  double fidelity;
  double infidelity;
  bool converged;
  double wall_ms;  // NaN unless timing was requested
  double probe_difference;
  int steps_per_period;
};

/// `count` evenly spaced points on [lo, hi]; endpoints exact, symmetric grids stay symmetric.
inline std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw Error("linear_grid: count must be >= 1");
  if (!(lo <= hi)) throw Error("linear_grid: min must not exceed max");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double n = count - 1;
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (lo * (n - i) + hi * i) / n;
  return out;
}

/// Grid points violating the slow-drift assumption |η|·τ ≪ 1 (flagged at |η|·τ > 0.1).
inline std::vector<double> slow_drift_violations(const Scenario& sc, const std::vector<double>& grid,
                                                 double limit = 0.1) {
  std::vector<double> out;
  if (sc.scheme() != Scheme::Zzcm) return out;
  for (double eta : grid)
    if (std::abs(eta) * sc.shortest_period() > limit) out.push_back(eta);
  return out;
}

/**
 * Fidelity at every grid point, records in grid order. Points run on up to
 * `workers` threads; a point whose step-halving probe fails is recorded with
 * converged = false and its finest estimate.
 */
inline std::vector<SweepRecord> run_sweep(const Scenario& sc, const std::vector<double>& grid,
                                          const PropagatorConfig& config, unsigned workers = 1,
                                          bool timing = false) {
  if (grid.empty()) throw Error("run_sweep: empty eta grid");
  config.validate();
  const DenseOperator ideal = sc.ideal();
  std::vector<SweepRecord> out(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord r{sc.name(), sc.k(), grid[i], 0.0, 0.0, true, std::nan(""), 0.0, 0};
    try {
      const GateFidelity g = gate_fidelity(sc.schedule(grid[i]), ideal, config);
      r.fidelity = g.fidelity;
      r.probe_difference = g.probe_difference;
      r.steps_per_period = g.steps_per_period;
    } catch (const ConvergenceError& e) {
      r.fidelity = trace_fidelity(ideal, e.fine());
      r.converged = false;
      r.probe_difference = e.difference();
      r.steps_per_period = e.steps_per_period();
    }
    r.infidelity = 1.0 - r.fidelity;
    if (timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out[i] = r;
  });
  return out;
}

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline constexpr const char* kSweepCsvHeader = "scenario,k,eta_ratio,fidelity,infidelity,converged,wall_ms";

/// CSV with LF line endings; wall_ms is left empty when not measured.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.scenario << ',' << r.k << ',' << format_double(r.eta_ratio) << ',' << format_double(r.fidelity) << ','
       << format_double(r.infidelity) << ',' << (r.converged ? "true" : "false") << ',';
    if (!std::isnan(r.wall_ms)) os << format_double(std::round(r.wall_ms * 1000.0) / 1000.0);
    os << '\n';
  }
}

/// `<scenario>_k<k>.csv`, or `<scenario>.csv` for dynamical baselines.
inline std::string sweep_file_name(const Scenario& sc) {
  if (sc.scheme() == Scheme::Dynamical) return sc.name() + ".csv";
  return sc.name() + "_k" + std::to_string(sc.k()) + ".csv";
}

}  // namespace zzcm
