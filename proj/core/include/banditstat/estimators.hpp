#pragma once

#include <optional>
#include <span>

#include "banditstat/engine.hpp"

namespace banditstat {

enum class EstimatorMethod { MLE, IPW };

struct Estimate {
  EstimatorMethod method = EstimatorMethod::MLE;
  std::optional<double> p1;  // empty when the arm was never pulled
  std::optional<double> p2;

  bool defined() const { return p1.has_value() && p2.has_value(); }
};

// Per-arm sample means. An arm with zero pulls yields an empty estimate for
// that arm.
Estimate mle_estimate(const ArmCounts& counts);

// Streaming form of the self-normalised inverse-propensity estimator
//   p_hat_k = (sum_t r_t 1{a_t=k} / pi_tk) / (sum_t 1{a_t=k} / pi_tk).
class IpwAccumulator {
 public:
  void add(const StepRecord& step);
  Estimate finish() const;

 private:
  double weight_[2] = {0.0, 0.0};
  double reward_[2] = {0.0, 0.0};
};

Estimate ipw_estimate(std::span<const StepRecord> steps);
Estimate ipw_estimate(const TrialLog& log);

}  // namespace banditstat
