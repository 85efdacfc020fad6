#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "zzcm/operator_core.hpp"
#include "zzcm/propagator.hpp"
#include "zzcm/scenario.hpp"
#include "zzcm/sweep.hpp"

namespace zzcm {

/// Raised for malformed or inconsistent run configurations (usage errors).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/**
 * Sweep configuration, INI dialect version 1:
 *
 *   version = 1
 *   [sweep]
 *   scenarios = s1, s1-dy
 *   k = 1, 2, 3, 4, 10
 *   eta_min = -0.5
 *   eta_max = 0.5
 *   eta_count = 21
 *   normalization = drive-amplitude    ; drive-amplitude | amplitude-cap | coupling
 *   [propagator]
 *   steps_per_period = 256
 *   tolerance = 1e-8
 *   max_refinements = 2
 *   [output]
 *   dir = out/fig1b
 *   workers = 1
 *   timing = false
 */
struct RunConfig {
  std::vector<std::string> scenarios;
  std::vector<int> k_values{4};
  double eta_min = 0.0;
  double eta_max = 0.0;
  int eta_count = 1;
  Normalization normalization = Normalization::DriveAmplitude;
  PropagatorConfig propagator;
  std::string output_dir = "out";
  unsigned workers = 1;
  bool timing = false;

  [[nodiscard]] std::vector<double> eta_grid() const { return linear_grid(eta_min, eta_max, eta_count); }

  [[nodiscard]] AmplitudeMode amplitude_mode() const {
    return normalization == Normalization::AmplitudeCap ? AmplitudeMode::Capped : AmplitudeMode::Uncapped;
  }

  void validate() const {
    if (scenarios.empty()) throw ConfigError("config: [sweep] scenarios is empty");
    if (k_values.empty()) throw ConfigError("config: [sweep] k is empty");
    for (int k : k_values)
      if (k < 1) throw ConfigError("config: k values must be positive");
    if (eta_count < 1) throw ConfigError("config: eta_count must be >= 1");
    if (!(eta_min <= eta_max)) throw ConfigError("config: eta_min must not exceed eta_max");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    try {
      propagator.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& name : scenarios) {
      const auto& cat = scenario_catalog();
      if (std::none_of(cat.begin(), cat.end(), [&](const auto& info) { return info.name == name; }))
        throw ConfigError("config: unknown scenario '" + name + "'");
      const bool two_qubit = is_two_qubit_scenario(name);
      if (two_qubit != (normalization == Normalization::Coupling))
        throw ConfigError("config: normalization '" + std::string(normalization_name(normalization)) +
                          "' does not apply to scenario '" + name + "'");
    }
  }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(", \t"), boost::token_compress_on);
  parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
  return parts;
}

template <class T>
T get_value(const boost::property_tree::ptree& tree, const std::string& path, T fallback) {
  try {
    return tree.get<T>(path, fallback);
  } catch (const boost::property_tree::ptree_error& e) {
    throw ConfigError("config: bad value for '" + path + "': " + e.what());
  }
}

}  // namespace detail

inline RunConfig parse_run_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const int version = detail::get_value(tree, "version", 0);
  if (version != 1) throw ConfigError("config: unsupported or missing version (expected version = 1)");

  static const std::vector<std::string> known = {
      "version",
      "sweep.scenarios", "sweep.k", "sweep.eta_min", "sweep.eta_max", "sweep.eta_count", "sweep.normalization",
      "propagator.steps_per_period", "propagator.tolerance", "propagator.max_refinements",
      "output.dir", "output.workers", "output.timing"};
  for (const auto& [section, body] : tree) {
    const bool is_section = section == "sweep" || section == "propagator" || section == "output";
    if (!is_section) {
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError("config: unknown key '" + section + "'");
      continue;
    }
    for (const auto& [key, value] : body)
      if (std::find(known.begin(), known.end(), section + "." + key) == known.end())
        throw ConfigError("config: unknown key '" + section + "." + key + "'");
  }

  RunConfig c;
  c.scenarios = detail::split_list(detail::get_value<std::string>(tree, "sweep.scenarios", ""));
  if (auto ks = detail::get_value<std::string>(tree, "sweep.k", ""); !ks.empty()) {
    c.k_values.clear();
    for (const auto& s : detail::split_list(ks)) {
      try {
        std::size_t used = 0;
        c.k_values.push_back(std::stoi(s, &used));
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError("config: bad k value '" + s + "'");
      }
    }
  }
  c.eta_min = detail::get_value(tree, "sweep.eta_min", 0.0);
  c.eta_max = detail::get_value(tree, "sweep.eta_max", c.eta_min);
  c.eta_count = detail::get_value(tree, "sweep.eta_count", 1);
  try {
    c.normalization = parse_normalization(detail::get_value<std::string>(tree, "sweep.normalization", "drive-amplitude"));
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.propagator.steps_per_period = detail::get_value(tree, "propagator.steps_per_period", 256);
  c.propagator.tolerance = detail::get_value(tree, "propagator.tolerance", 1e-8);
  c.propagator.max_refinements = detail::get_value(tree, "propagator.max_refinements", 2);
  c.output_dir = detail::get_value<std::string>(tree, "output.dir", "out");
  const int workers = detail::get_value(tree, "output.workers", 1);
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  c.workers = static_cast<unsigned>(workers);
  c.timing = detail::get_value(tree, "output.timing", false);
  c.validate();
  return c;
}

inline RunConfig parse_run_config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

}  // namespace zzcm
