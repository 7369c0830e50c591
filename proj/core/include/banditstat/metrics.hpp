#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditstat/engine.hpp"
#include "banditstat/estimators.hpp"
#include "banditstat/hypothesis.hpp"

namespace banditstat {

struct RateSummary {
  double rate = 0.0;  // rejections / n_sims; undefined outcomes count as non-rejections
  double se = 0.0;    // sqrt(rate (1 - rate) / n_sims)
  int undefined_count = 0;
  int n_sims = 0;
};

// Throws std::invalid_argument on an empty list or mixed test identifiers.
RateSummary reject_rate_summary(std::span<const TestOutcome> outcomes);

// Bin edges for the final assignment probability of the leading arm:
// [0.5,0.6), [0.6,0.7), [0.7,0.8), [0.8,0.9), [0.9,1.0], last bin closed.
inline constexpr std::array<double, 6> kAssignmentHistEdges = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

// Takes each trial's final pi1, folds it to max(pi1, 1-pi1) and returns the
// five bin proportions (they sum to 1). Throws std::invalid_argument when
// empty or when a value falls outside [0, 1].
std::array<double, 5> assignment_prob_histogram(std::span<const double> final_pi1);

// One row of the estimator-diagnostics table.
struct DiagnosticsRow {
  EstimatorMethod method = EstimatorMethod::MLE;
  std::string arm;  // "1", "2", "diff" (p1-p2) or "abs_diff"
  double mean_estimate = 0.0;
  double bias = 0.0;
  double se_estimate = 0.0;  // SD across trials / sqrt(defined trials)
  // Moments of the per-trial Wald statistic built from this estimator;
  // identical across the method's four rows.
  double mean_wald = 0.0;
  double median_wald = 0.0;
  double se_wald = 0.0;
};

// Per-method diagnostics over one cell's estimates and Wald statistics.
// Undefined estimates/statistics are excluded from the moments; the counts of
// defined entries used are reported. Throws std::invalid_argument when no
// estimate is defined.
std::vector<DiagnosticsRow> bias_table(std::span<const Estimate> estimates,
                                       std::span<const std::optional<double>> wald_stats,
                                       const EnvSpec& env);

struct RewardSummary {
  double mean = 0.0;
  double se = 0.0;  // SD across trials / sqrt(trials)
};

RewardSummary mean_reward_summary(std::span<const double> per_trial_mean_reward);

// Classic two-proportion total sample size (both arms together):
//   per-arm m = ceil((z_{1-alpha/2} + z_power)^2 (p1(1-p1) + p2(1-p2)) / (p1-p2)^2)
int required_sample_size(double p1, double p2, double alpha, double power);

}  // namespace banditstat
