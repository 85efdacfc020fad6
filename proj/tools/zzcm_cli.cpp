#include <iostream>

#include <CLI11.hpp>

#include "zzcm/cli.hpp"

int main(int argc, char** argv) {
  using namespace zzcm::cli;
  CLI::App app{"ZZ-crosstalk mitigation simulator"};
  app.require_subcommand(1);

  SweepOptions sweep;
  std::string out_dir;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the scenario sweeps of a config file");
  sweep_cmd->add_option("--config", sweep.config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides $ZZCM_OUT_DIR and the config)");
  auto* workers = sweep_cmd->add_option("--workers", "worker threads")->check(CLI::PositiveNumber);
  auto* spp = sweep_cmd->add_option("--steps-per-period", "integrator steps per modulation period")
                  ->check(CLI::Range(16, 1 << 20));

  FindGammaOptions gamma;
  auto* gamma_cmd = app.add_subcommand("find-gamma", "locate the error-cumulant zero and write the scan");
  gamma_cmd->add_option("--area", gamma.area, "pulse area, e.g. pi/4")->capture_default_str();
  gamma_cmd->add_option("--k", gamma.k, "frame repetitions")->capture_default_str();
  gamma_cmd->add_option("--lo", gamma.lo, "bracket lower end")->capture_default_str();
  gamma_cmd->add_option("--hi", gamma.hi, "bracket upper end")->capture_default_str();
  gamma_cmd->add_option("--step", gamma.step, "coarse scan step")->capture_default_str();
  gamma_cmd->add_option("--root", gamma.root_index, "which zero to return (1 = smallest)")->capture_default_str();
  gamma_cmd->add_option("--out", out_dir, "output directory");

  ExportPulseOptions pulse;
  auto* pulse_cmd = app.add_subcommand("export-pulse", "sample the control waveforms of a scenario");
  pulse_cmd->add_option("--scenario", pulse.scenario, "scenario name")->capture_default_str();
  pulse_cmd->add_option("--k", pulse.k, "frame repetitions")->capture_default_str();
  pulse_cmd->add_option("--rate", pulse.rate, "samples per unit time")->capture_default_str();
  pulse_cmd->add_option("--amplitude", pulse.amplitude, "capped | uncapped")->capture_default_str();
  pulse_cmd->add_option("--out", out_dir, "output directory");

  auto* list_cmd = app.add_subcommand("list-scenarios", "print the scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::optional<std::string> out;
  if (!out_dir.empty()) out = out_dir;
  try {
    if (*sweep_cmd) {
      sweep.out_dir = out;
      if (*workers) sweep.workers = workers->as<unsigned>();
      if (*spp) sweep.steps_per_period = spp->as<int>();
      return cmd_sweep(sweep, std::cout, std::cerr);
    }
    if (*gamma_cmd) {
      gamma.out_dir = out;
      return cmd_find_gamma(gamma, std::cout, std::cerr);
    }
    if (*pulse_cmd) {
      pulse.out_dir = out;
      return cmd_export_pulse(pulse, std::cout, std::cerr);
    }
    if (*list_cmd) return cmd_list_scenarios(std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
