#include "banditstat/engine.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "banditstat/errors.hpp"

namespace banditstat {

ArmCounts summarize(std::span<const StepRecord> steps) {
  ArmCounts counts;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const StepRecord& s = steps[i];
    if (s.arm != 1 && s.arm != 2) {
      throw DataIntegrityError("summarize: step " + std::to_string(i + 1) +
                               " has arm outside {1, 2}");
    }
    if (s.reward != 0 && s.reward != 1) {
      throw DataIntegrityError("summarize: step " + std::to_string(i + 1) +
                               " has reward outside {0, 1}");
    }
    if (!(s.pi1 >= 0.0 && s.pi1 <= 1.0)) {
      throw DataIntegrityError("summarize: step " + std::to_string(i + 1) +
                               " has assignment probability outside [0, 1]");
    }
    if (s.arm == 1) {
      counts.n1 += 1;
      counts.s1 += s.reward;
    } else {
      counts.n2 += 1;
      counts.s2 += s.reward;
    }
  }
  return counts;
}

ArmCounts summarize(const TrialLog& log) { return summarize(std::span(log.steps)); }

PosteriorState state_from_counts(const PolicySpec& spec, const ArmCounts& counts) {
  PosteriorState state = initial_state(spec);
  double w = spec.kind == PolicyKind::ThompsonSampling ? spec.ts_update_weight : 1.0;
  state.posterior[0].alpha += w * static_cast<double>(counts.s1);
  state.posterior[0].beta += w * static_cast<double>(counts.n1 - counts.s1);
  state.posterior[1].alpha += w * static_cast<double>(counts.s2);
  state.posterior[1].beta += w * static_cast<double>(counts.n2 - counts.s2);
  state.pulls = {counts.n1, counts.n2};
  state.successes = {counts.s1, counts.s2};
  return state;
}

double final_assignment_probability(const PolicySpec& spec, const ArmCounts& counts) {
  return assignment_probability(state_from_counts(spec, counts), spec);
}

namespace detail {

namespace {
double lbeta(double a, double b) {
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}
}  // namespace

TsProbTracker::TsProbTracker(double prior_alpha, double prior_beta, int weight)
    : p_{prior_alpha, prior_beta, prior_alpha, prior_beta},
      g_(0.5),
      h_(std::exp(lbeta(2.0 * prior_alpha, 2.0 * prior_beta) - 2.0 * lbeta(prior_alpha, prior_beta))),
      weight_(weight) {}

std::optional<TsProbTracker> TsProbTracker::create(const PolicySpec& spec) {
  if (spec.kind != PolicyKind::ThompsonSampling) return std::nullopt;
  double w = spec.ts_update_weight;
  double r = std::nearbyint(w);
  if (!(w == r) || r < 1.0 || r > 64.0) return std::nullopt;
  return TsProbTracker(spec.ts_prior_alpha, spec.ts_prior_beta, static_cast<int>(r));
}

}  // namespace detail

TrialLog run_trial(const EnvSpec& env, const PolicySpec& spec, RngStream& stream) {
  TrialLog log;
  log.env = env;
  log.policy = spec;
  log.steps.reserve(static_cast<std::size_t>(env.horizon > 0 ? env.horizon : 0));
  run_trial_stream(env, spec, stream, [&](const StepRecord& s) { log.steps.push_back(s); });
  return log;
}

}  // namespace banditstat
