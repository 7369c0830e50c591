#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "banditstat/io.hpp"
#include "banditstat/runner.hpp"

namespace banditstat {

struct TestRequest {
  enum class Kind { WaldMle, WaldIpw, Welch, BayesFactor, CalibratedWald };
  Kind kind = Kind::WaldMle;
  double critical = 1.96;       // WaldMle / WaldIpw
  double alpha = 0.05;          // Welch
  double cutoff = 3.0;          // BayesFactor
  double prior_alpha = 1.0;     // BayesFactor analysis prior
  double prior_beta = 1.0;
  bool normalized = false;      // BayesFactor prior-normalised variant
  std::string calibration_file; // CalibratedWald, resolved against the config dir
};

struct CellConfig {
  EnvSpec env;
  PolicySpec policy;
};

struct RunConfig {
  std::vector<CellConfig> cells;
  int n_sims = 1;
  std::vector<TestRequest> tests;
  std::uint64_t base_seed = 1;
  int workers = 0;
  // Trial logs are written when set, or by default when n_sims == 1.
  std::optional<bool> write_logs;

  bool should_write_logs() const { return write_logs.value_or(n_sims == 1); }
};

// JSON schema (see README): {"base_seed", "n_sims", "workers", "write_logs",
// "cells": [{"p1","p2","n","policy"}...], "tests": [{"type",...}...]}.
// Relative calibration paths are resolved against `config_dir`.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& config_dir);

// Applies one configured test to one simulation's results. `cal` must be
// non-null for CalibratedWald requests.
TestOutcome apply_test(const TestRequest& req, const SimStats& sim,
                       const CalibrationRecord* cal);

// Simulates every cell and writes summary.csv, diagnostics.csv,
// assignment_hist.csv, reward.csv (and logs/cell_NNN.csv when enabled) into
// out_dir. Throws on the first failing cell, naming it.
void run_command(const RunConfig& config, const std::filesystem::path& out_dir);

CriticalValues calibrate_command(double null_p, int n, const PolicySpec& policy, int n_sims,
                                 double alpha, std::uint64_t base_seed,
                                 const std::filesystem::path& out_file, int workers = 0);

// Post-hoc analysis of a single logged experiment: estimates plus the
// standard battery of tests, written as JSON.
void analyze_command(const std::filesystem::path& log_file,
                     const std::optional<std::filesystem::path>& calibration_file,
                     const std::filesystem::path& out_file);

// Renders <in_dir>/summary.csv to `out` as csv or json, adding a rounded
// percentage display column.
void report_command(const std::filesystem::path& in_dir, const std::string& format,
                    std::ostream& out);

}  // namespace banditstat
