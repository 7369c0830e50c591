#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "banditstat/engine.hpp"
#include "banditstat/hypothesis.hpp"
#include "banditstat/metrics.hpp"

namespace banditstat {

// --- Trial logs: CSV `sim_id,t,arm,reward,pi1` ------------------------------

void write_trial_log_header(std::ostream& out);
void append_trial_log(std::ostream& out, int sim_id, std::span<const StepRecord> steps);

struct ParsedTrialLog {
  int sim_id = 0;
  std::vector<StepRecord> steps;
};

// Parses every simulation in the file, grouped by sim_id in file order.
// Schema violations raise DataIntegrityError naming row and column.
std::vector<ParsedTrialLog> parse_trial_log_csv(std::istream& in);

// --- Calibration records: JSON ----------------------------------------------

struct CalibrationRecord {
  CriticalValues critical;
  std::string policy_label;
  double alpha = 0.05;
  std::uint64_t base_seed = 0;
};

void write_calibration_json(std::ostream& out, const CalibrationRecord& record);
CalibrationRecord parse_calibration_json(std::istream& in);

// --- Summary tables: CSV -----------------------------------------------------

struct SummaryRow {
  std::string policy;
  double p1 = 0.0;
  double p2 = 0.0;
  int n = 0;
  int n_sims = 0;
  std::string test;
  std::string params;
  double reject_rate = 0.0;
  double se = 0.0;
  int undefined_count = 0;
};

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
std::vector<SummaryRow> parse_summary_csv(std::istream& in);

struct DiagnosticsCsvRow {
  std::string policy;
  double p1 = 0.0;
  double p2 = 0.0;
  std::string method;  // "mle" or "ipw"
  DiagnosticsRow row;
};

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticsCsvRow> rows);

struct HistogramCsvRow {
  std::string policy;
  double p1 = 0.0;
  double p2 = 0.0;
  int n = 0;
  int n_sims = 0;
  std::array<double, 5> proportions{};
};

void write_histogram_csv(std::ostream& out, std::span<const HistogramCsvRow> rows);

struct RewardCsvRow {
  std::string policy;
  double p1 = 0.0;
  double p2 = 0.0;
  int n = 0;
  int n_sims = 0;
  double mean_reward = 0.0;
  double se = 0.0;
};

void write_reward_csv(std::ostream& out, std::span<const RewardCsvRow> rows);

std::string method_name(EstimatorMethod method);

namespace detail {
// RFC 4180 field escaping; policy labels such as "ts(1,1)" contain commas.
std::string csv_escape(const std::string& field);
}  // namespace detail

}  // namespace banditstat
