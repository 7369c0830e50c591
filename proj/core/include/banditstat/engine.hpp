#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "banditstat/env.hpp"
#include "banditstat/policy.hpp"
#include "banditstat/rng.hpp"

namespace banditstat {

struct StepRecord {
  std::int32_t t = 0;    // 1-based participant index
  std::int8_t arm = 0;   // 1 or 2
  std::int8_t reward = 0;
  double pi1 = 0.0;      // assignment probability of arm 1 before this pull
};

struct TrialLog {
  EnvSpec env;
  PolicySpec policy;
  std::vector<StepRecord> steps;
};

struct ArmCounts {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
};

ArmCounts summarize(std::span<const StepRecord> steps);
ArmCounts summarize(const TrialLog& log);

// Posterior/count state implied by aggregate counts under `spec`'s prior and
// update weight.
PosteriorState state_from_counts(const PolicySpec& spec, const ArmCounts& counts);

// Assignment probability the policy would use for participant horizon+1.
double final_assignment_probability(const PolicySpec& spec, const ArmCounts& counts);

namespace detail {

// Maintains g = P(theta_1 > theta_2) across unit posterior increments in O(1)
// per update, alongside h = B(a1+a2, b1+b2) / (B(a1,b1) B(a2,b2)):
//   a1 += 1:  g += h/a1,  b1 += 1:  g -= h/b1,
//   a2 += 1:  g -= h/a2,  b2 += 1:  g += h/b2,
// with the matching rational update of h. Only available when the update
// weight is a positive integer (a weight-w update is w unit increments).
class TsProbTracker {
 public:
  static std::optional<TsProbTracker> create(const PolicySpec& spec);

  double prob() const { return g_; }

  void update(int arm, int reward) {
    for (int i = 0; i < weight_; ++i) unit_update(arm, reward);
  }

 private:
  TsProbTracker(double prior_alpha, double prior_beta, int weight);

  void unit_update(int arm, int reward) {
    double a1 = p_[0], b1 = p_[1], a2 = p_[2], b2 = p_[3];
    double total = a1 + b1 + a2 + b2;
    if (arm == 1) {
      if (reward == 1) {
        g_ += h_ / a1;
        h_ *= (a1 + a2) * (a1 + b1) / (a1 * total);
        p_[0] = a1 + 1.0;
      } else {
        g_ -= h_ / b1;
        h_ *= (b1 + b2) * (a1 + b1) / (b1 * total);
        p_[1] = b1 + 1.0;
      }
    } else {
      if (reward == 1) {
        g_ -= h_ / a2;
        h_ *= (a1 + a2) * (a2 + b2) / (a2 * total);
        p_[2] = a2 + 1.0;
      } else {
        g_ += h_ / b2;
        h_ *= (b1 + b2) * (a2 + b2) / (b2 * total);
        p_[3] = b2 + 1.0;
      }
    }
    if (g_ < 0.0) g_ = 0.0;
    if (g_ > 1.0) g_ = 1.0;
  }

  double p_[4];  // a1, b1, a2, b2
  double g_;
  double h_;
  int weight_;
};

}  // namespace detail

struct TrialResult {
  ArmCounts counts;
  PosteriorState final_state;
  double final_pi1 = 0.0;
  double mean_reward = 0.0;
};

// Runs one trial, invoking `on_step(const StepRecord&)` for every pull in
// order. The sink form exists so sweeps over many simulations can fold steps
// into accumulators without materialising logs.
template <typename StepFn>
TrialResult run_trial_stream(const EnvSpec& env, const PolicySpec& spec, RngStream& stream,
                             StepFn&& on_step) {
  env.validate();
  spec.validate();
  PosteriorState state = initial_state(spec);
  auto tracker = detail::TsProbTracker::create(spec);
  bool is_ts = spec.kind == PolicyKind::ThompsonSampling;
  double reward_sum = 0.0;
  for (std::int32_t t = 1; t <= env.horizon; ++t) {
    double pi1 = tracker ? tracker->prob() : assignment_probability(state, spec);
    int arm = draw_arm(state, spec, stream);
    int reward = bernoulli_draw(arm == 1 ? env.p1 : env.p2, stream);
    on_step(StepRecord{t, static_cast<std::int8_t>(arm), static_cast<std::int8_t>(reward), pi1});
    state = is_ts ? ts_update(state, arm, reward, spec.ts_update_weight)
                  : record_outcome(state, arm, reward);
    if (tracker) tracker->update(arm, reward);
    reward_sum += reward;
  }
  TrialResult result;
  result.counts = {state.pulls[0], state.pulls[1], state.successes[0], state.successes[1]};
  result.final_state = state;
  result.final_pi1 = tracker ? tracker->prob() : assignment_probability(state, spec);
  result.mean_reward = reward_sum / static_cast<double>(env.horizon);
  return result;
}

TrialLog run_trial(const EnvSpec& env, const PolicySpec& spec, RngStream& stream);

}  // namespace banditstat
