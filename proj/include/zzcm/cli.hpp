#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zzcm/config.hpp"
#include "zzcm/cumulant.hpp"
#include "zzcm/pulse.hpp"
#include "zzcm/scenario.hpp"
#include "zzcm/sweep.hpp"

namespace zzcm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr const char* kOutDirEnv = "ZZCM_OUT_DIR";

/// Output directory precedence: --out, then $ZZCM_OUT_DIR, then the config value.
inline std::string resolve_output_dir(const std::optional<std::string>& flag, const std::string& configured) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return configured;
}

/// Parses "pi/4", "pi", "2*pi/3", "0.785" and the like.
inline double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw ConfigError("empty angle");
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad angle '" + text + "'");
    }
    if (used != part.size()) throw ConfigError("bad angle '" + text + "'");
    return v;
  };
  double value = 1.0;
  std::string rest = s;
  double divisor = 1.0;
  if (auto slash = rest.find('/'); slash != std::string::npos) {
    divisor = number(rest.substr(slash + 1));
    rest = rest.substr(0, slash);
  }
  if (auto p = rest.find("pi"); p != std::string::npos) {
    if (p + 2 != rest.size()) throw ConfigError("bad angle '" + text + "'");
    std::string factor = rest.substr(0, p);
    if (!factor.empty() && factor.back() == '*') factor.pop_back();
    value = std::numbers::pi * (factor.empty() ? 1.0 : number(factor));
  } else {
    value = number(rest);
  }
  if (divisor == 0.0) throw ConfigError("bad angle '" + text + "'");
  return value / divisor;
}

struct SweepOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
  std::optional<int> steps_per_period;
};

/**
 * Runs every (scenario, k) of the config and writes one CSV each. Dynamical
 * baselines ignore k and are written once. Returns kExitFailure if any point
 * failed its convergence probe.
 */
inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot read config '" + opt.config_path + "'");
    config = parse_run_config(in);
    if (opt.workers) config.workers = *opt.workers;
    if (opt.steps_per_period) config.propagator.steps_per_period = *opt.steps_per_period;
    config.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::filesystem::path dir = resolve_output_dir(opt.out_dir, config.output_dir);
  std::filesystem::create_directories(dir);
  const auto grid = config.eta_grid();

  bool all_converged = true;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %4s %6s %14s %14s %s\n", "scenario", "k", "points", "min fidelity",
                "max infidelity", "converged");
  out << line;
  for (const auto& name : config.scenarios) {
    const bool dynamical = name.ends_with("-dy");
    const std::vector<int> ks = dynamical ? std::vector<int>{config.k_values.front()} : config.k_values;
    for (int k : ks) {
      const Scenario sc = make_scenario(name, k, config.amplitude_mode());
      if (const auto bad = slow_drift_violations(sc, grid); !bad.empty())
        err << "warning: " << sc.name() << " k=" << k << ": |eta|*tau > 0.1 at " << bad.size()
            << " grid point(s); the slow-drift assumption does not hold there\n";
      const auto records = run_sweep(sc, grid, config.propagator, config.workers, config.timing);
      const auto path = dir / sweep_file_name(sc);
      std::ofstream csv(path, std::ios::binary);
      write_sweep_csv(csv, records);
      if (!csv) {
        err << "error: cannot write " << path.string() << '\n';
        return kExitFailure;
      }
      double min_f = 1.0;
      double max_inf = 0.0;
      bool conv = true;
      for (const auto& r : records) {
        min_f = std::min(min_f, r.fidelity);
        max_inf = std::max(max_inf, r.infidelity);
        if (!r.converged) {
          conv = false;
          err << "error: " << sc.name() << " k=" << sc.k() << " eta=" << format_double(r.eta_ratio)
              << ": step-halving probe did not converge (1 - F = " << r.probe_difference << ")\n";
        }
      }
      all_converged = all_converged && conv;
      std::snprintf(line, sizeof line, "%-12s %4d %6zu %14.10f %14.4e %s\n", sc.name().c_str(), sc.k(),
                    records.size(), min_f, max_inf, conv ? "yes" : "NO");
      out << line;
    }
  }
  out << "normalization: eta ratio in units of " << normalization_name(config.normalization) << "; wrote "
      << dir.string() << '\n';
  return all_converged ? kExitOk : kExitFailure;
}

struct FindGammaOptions {
  std::string area = "pi/4";
  int k = 1;
  double lo = 0.1;
  double hi = 10.0;
  double step = 0.01;
  int root_index = 1;
  std::optional<std::string> out_dir;
};

/// Prints γ* and writes the scanned EC curve (`gamma,ec_relative`) to <out>/ec_curve.csv.
inline int cmd_find_gamma(const FindGammaOptions& opt, std::ostream& out, std::ostream& err) {
  double area = 0.0;
  GammaSearch search{opt.lo, opt.hi, opt.step, 1e-9, opt.root_index};
  try {
    area = parse_angle(opt.area);
    if (!(area > 0)) throw ConfigError("area must be positive");
    if (opt.k < 1) throw ConfigError("k must be positive");
    if (!(opt.lo < opt.hi)) throw ConfigError("bracket must satisfy lo < hi");
    if (!(opt.step > 0)) throw ConfigError("scan step must be positive");
    if (opt.root_index < 1) throw ConfigError("root index must be >= 1");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::filesystem::path dir = resolve_output_dir(opt.out_dir, "out");
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "ec_curve.csv", std::ios::binary);
    csv << "gamma,ec_relative\n";
    for (const auto& [g, ec] : cumulant_curve(area, opt.k, search))
      csv << format_double(g) << ',' << format_double(ec) << '\n';
  }
  try {
    const GammaResult r = find_gamma(area, opt.k, search);
    char line[128];
    std::snprintf(line, sizeof line, "gamma* = %.6f  (EC/(eta*tau) = %.3e, area = %.6f, k = %d)\n", r.gamma,
                  r.ec_relative, area, opt.k);
    out << line;
    return kExitOk;
  } catch (const GammaNotFound& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

struct ExportPulseOptions {
  std::string scenario = "s1";
  int k = 4;
  double rate = 256.0;
  std::string amplitude = "uncapped";
  std::optional<std::string> out_dir;
};

/// Samples every control channel of a scenario to <out>/<scenario>[_k<k>]_pulse.csv.
inline int cmd_export_pulse(const ExportPulseOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> sc;
  try {
    if (!(opt.rate > 0)) throw ConfigError("sample rate must be positive");
    if (opt.k < 1) throw ConfigError("k must be positive");
    AmplitudeMode mode = AmplitudeMode::Uncapped;
    if (opt.amplitude == "capped") {
      mode = AmplitudeMode::Capped;
    } else if (opt.amplitude != "uncapped") {
      throw ConfigError("amplitude must be 'capped' or 'uncapped'");
    }
    sc = make_scenario(opt.scenario, opt.k, mode);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::filesystem::path dir = resolve_output_dir(opt.out_dir, "out");
  std::filesystem::create_directories(dir);
  const std::string stem = sc->scheme() == Scheme::Dynamical ? sc->name() : sc->name() + "_k" + std::to_string(sc->k());
  const auto path = dir / (stem + "_pulse.csv");
  std::ofstream csv(path, std::ios::binary);
  write_waveform_csv(csv, sc->pulses(), opt.rate);
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

inline int cmd_list_scenarios(std::ostream& out) {
  for (const auto& info : scenario_catalog()) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %s\n", info.name.c_str(), info.description.c_str());
    out << line;
  }
  return kExitOk;
}

}  // namespace zzcm::cli
