#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "banditstat/commands.hpp"
#include "banditstat/policy.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Simulation and inference for two-arm adaptive experiments"};
  app.require_subcommand(1);

  // run
  std::string run_config_path, run_out_dir;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_workers;
  auto* run = app.add_subcommand("run", "Simulate the cells of a JSON config");
  run->add_option("--config", run_config_path, "Run configuration (JSON)")->required();
  run->add_option("--seed", run_seed, "Override the config's base seed");
  run->add_option("--workers", run_workers, "Worker threads (0 = hardware)");
  run->add_option("--out", run_out_dir, "Output directory")->required();

  // calibrate
  double cal_p0 = 0.5, cal_alpha = 0.05;
  int cal_n = 0, cal_sims = 0;
  std::uint64_t cal_seed = 1;
  std::string cal_policy = "ts", cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "Derive empirical Wald critical values");
  calibrate->add_option("--p0", cal_p0, "Null success probability (both arms)")->required();
  calibrate->add_option("--n", cal_n, "Trial horizon")->required();
  calibrate->add_option("--policy", cal_policy, "Policy spec, e.g. ts, ts:1,1, ur, eg:0.1");
  calibrate->add_option("--sims", cal_sims, "Calibration simulations")->required();
  calibrate->add_option("--alpha", cal_alpha, "Two-sided significance level");
  calibrate->add_option("--seed", cal_seed, "Base seed");
  calibrate->add_option("--out", cal_out, "Output JSON file")->required();

  // analyze
  std::string an_log, an_out;
  std::string an_calibration;
  auto* analyze = app.add_subcommand("analyze", "Post-hoc analysis of one trial log");
  analyze->add_option("--log", an_log, "Trial-log CSV")->required();
  analyze->add_option("--calibration", an_calibration, "Calibration JSON for wald_cal");
  analyze->add_option("--out", an_out, "Output JSON file")->required();

  // report
  std::string rep_in, rep_format = "csv";
  auto* report = app.add_subcommand("report", "Render a run's summary table");
  report->add_option("--in", rep_in, "Run output directory")->required();
  report->add_option("--format", rep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::ifstream in(run_config_path);
      if (!in) {
        std::cerr << "error: cannot read " << run_config_path << "\n";
        return 1;
      }
      banditstat::RunConfig config =
          banditstat::parse_run_config(in, fs::path(run_config_path).parent_path());
      if (run_seed) config.base_seed = *run_seed;
      if (run_workers) config.workers = *run_workers;
      banditstat::run_command(config, fs::path(run_out_dir));
    } else if (calibrate->parsed()) {
      banditstat::PolicySpec policy = banditstat::parse_policy_spec(cal_policy);
      banditstat::calibrate_command(cal_p0, cal_n, policy, cal_sims, cal_alpha, cal_seed, cal_out);
    } else if (analyze->parsed()) {
      std::optional<fs::path> cal;
      if (!an_calibration.empty()) cal = fs::path(an_calibration);
      banditstat::analyze_command(an_log, cal, an_out);
    } else if (report->parsed()) {
      banditstat::report_command(rep_in, rep_format, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
