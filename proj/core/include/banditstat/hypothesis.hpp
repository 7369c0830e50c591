#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "banditstat/engine.hpp"
#include "banditstat/estimators.hpp"

namespace banditstat {

struct TestOutcome {
  std::string test;    // short identifier, e.g. "wald", "welch", "bf"
  std::string params;  // human-readable parameterisation, e.g. "cutoff=3"
  std::optional<double> statistic;
  bool reject = false;
  bool undefined = false;
  std::optional<double> p_value;
  std::optional<double> critical_lower;
  std::optional<double> critical_upper;
};

struct CriticalValues {
  double lower = 0.0;
  double upper = 0.0;
  double calibration_null_p = 0.0;
  int calibration_n = 0;
  int calibration_sims = 0;
  int undefined_excluded = 0;
};

// Unpooled two-proportion z statistic (p1_hat - p2_hat) / sqrt(v1/n1 + v2/n2)
// with v_k = p_k_hat (1 - p_k_hat). Empty when either estimate is missing or
// the variance estimate is exactly zero. Works for MLE and IPW estimates
// alike; sample sizes always come from the counts.
std::optional<double> wald_statistic(const Estimate& est, const ArmCounts& counts);

// Two-sided test against fixed symmetric bounds (default |z| > 1.96, the
// cutoff used throughout the tables). Undefined statistics never reject.
TestOutcome wald_test(std::optional<double> statistic, double critical = 1.96,
                      const std::string& name = "wald");

// Two-sided test against simulation-calibrated bounds: reject iff the
// statistic falls strictly outside (lower, upper).
TestOutcome wald_test(std::optional<double> statistic, const CriticalValues& critical,
                      const std::string& name = "wald_cal");

// Unequal-variance t test on per-arm Bernoulli samples. Undefined when either
// arm has fewer than two pulls or both sample variances vanish.
TestOutcome welch_test(const ArmCounts& counts, double alpha = 0.05);

// Bayes factor for H1 (independent arm means) against H0 (shared mean) under
// Beta(prior_alpha, prior_beta) priors on every mean:
//   BF10 = B(a+S1, b+F1) B(a+S2, b+F2) / B(2a+S1+S2, 2b+F1+F2).
// `normalized` additionally divides by the prior constant
// B(a,b)^2 / B(2a,2b), making BF10 = 1 on no data.
double bayes_factor(const ArmCounts& counts, double prior_alpha = 1.0, double prior_beta = 1.0,
                    bool normalized = false);

// Rejects when bf > cutoff. Conventional evidence cutoffs: 3 (substantial),
// 1, 0.4.
TestOutcome bf_test(double bf, double cutoff);

// Simulates `n_sims` null trials of the given design, computes the MLE Wald
// statistic for each, and returns the empirical alpha/2 and 1-alpha/2
// quantiles (nearest-rank). Undefined statistics are dropped and counted.
// Throws std::invalid_argument for a non-null env, n_sims < 1000 or alpha
// outside (0, 1); CalibrationError when fewer than half the statistics are
// defined or the bounds degenerate.
CriticalValues calibrate_critical_values(const EnvSpec& null_env, const PolicySpec& spec,
                                         int n_sims, double alpha, std::uint64_t base_seed,
                                         int workers = 0);

// Stream salt for calibration sweeps, keeping them disjoint from evaluation
// cells run under the same base seed.
inline constexpr std::uint64_t kCalibrationCellId = 0xCA11B5EDull;

}  // namespace banditstat
