#include "banditstat/estimators.hpp"

#include <string>

#include "banditstat/errors.hpp"

namespace banditstat {

Estimate mle_estimate(const ArmCounts& counts) {
  Estimate est;
  est.method = EstimatorMethod::MLE;
  if (counts.n1 > 0) est.p1 = static_cast<double>(counts.s1) / static_cast<double>(counts.n1);
  if (counts.n2 > 0) est.p2 = static_cast<double>(counts.s2) / static_cast<double>(counts.n2);
  return est;
}

void IpwAccumulator::add(const StepRecord& step) {
  if (step.arm != 1 && step.arm != 2) {
    throw DataIntegrityError("ipw_estimate: arm outside {1, 2} at t=" + std::to_string(step.t));
  }
  if (!(step.pi1 >= 0.0 && step.pi1 <= 1.0)) {
    throw DataIntegrityError("ipw_estimate: pi1 outside [0, 1] at t=" + std::to_string(step.t));
  }
  int k = step.arm - 1;
  double pi = step.arm == 1 ? step.pi1 : 1.0 - step.pi1;
  if (pi <= 0.0) {
    throw DataIntegrityError("ipw_estimate: arm " + std::to_string(step.arm) +
                             " pulled with recorded probability 0 at t=" + std::to_string(step.t));
  }
  weight_[k] += 1.0 / pi;
  reward_[k] += static_cast<double>(step.reward) / pi;
}

Estimate IpwAccumulator::finish() const {
  Estimate est;
  est.method = EstimatorMethod::IPW;
  if (weight_[0] > 0.0) est.p1 = reward_[0] / weight_[0];
  if (weight_[1] > 0.0) est.p2 = reward_[1] / weight_[1];
  return est;
}

Estimate ipw_estimate(std::span<const StepRecord> steps) {
  IpwAccumulator acc;
  for (const StepRecord& s : steps) acc.add(s);
  return acc.finish();
}

Estimate ipw_estimate(const TrialLog& log) { return ipw_estimate(std::span(log.steps)); }

}  // namespace banditstat
