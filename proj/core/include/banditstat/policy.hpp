#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "banditstat/rng.hpp"

namespace banditstat {

enum class PolicyKind { UniformRandom, ThompsonSampling, EpsilonGreedy };

struct PolicySpec {
  PolicyKind kind = PolicyKind::UniformRandom;

  // Thompson sampling: shared Beta(prior_alpha, prior_beta) prior and the
  // multiplier applied to each posterior increment.
  double ts_prior_alpha = 1.0;
  double ts_prior_beta = 1.0;
  double ts_update_weight = 1.0;

  // Epsilon-greedy exploration rate.
  double eg_epsilon = 0.1;

  void validate() const;

  // Compact label used in CSV output, e.g. "ur", "ts(1,1)", "ts(19,1;w=10)",
  // "eg(0.1)".
  std::string label() const;
};

// Parses the label grammar accepted on the command line:
//   "ur" | "ts" | "ts:a,b" | "ts:a,b,w" | "eg" | "eg:eps"
PolicySpec parse_policy_spec(const std::string& text);

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

// Per-arm bookkeeping carried through a trial. Posterior parameters are only
// meaningful under Thompson sampling; pull/success counts are maintained for
// every policy.
struct PosteriorState {
  std::array<BetaParams, 2> posterior;
  std::array<std::int64_t, 2> pulls{0, 0};
  std::array<std::int64_t, 2> successes{0, 0};
};

PosteriorState initial_state(const PolicySpec& spec);

// P(theta_a > theta_b) for independent theta_a ~ Beta(a), theta_b ~ Beta(b).
// Exact finite sum when a parameter is a small integer, adaptive quadrature
// otherwise; absolute error <= 1e-10. Throws std::domain_error on
// non-positive parameters.
double posterior_prob_optimal(const BetaParams& a, const BetaParams& b);

namespace detail {
// Quadrature route regardless of parameter integrality; reference for
// validating the closed-form fast path.
double posterior_prob_optimal_quadrature(const BetaParams& a, const BetaParams& b);
}  // namespace detail

// Posterior update after observing `reward` on `arm` (1-based), with
// increment weight w: alpha += w*reward, beta += w*(1-reward) on that arm.
// Pull and success counts advance by one regardless of w.
PosteriorState ts_update(const PosteriorState& state, int arm, int reward, double w);

// Count-only update used by the non-Bayesian policies.
PosteriorState record_outcome(const PosteriorState& state, int arm, int reward);

// Probability that the next pull goes to arm 1, before any randomness is
// consumed. Uniform: 0.5. Thompson: P(theta_1 > theta_2) under the current
// posteriors. Epsilon-greedy: eps/2 + (1-eps)*g where g is arm 1's share of
// the greedy choice (ties, including arms never pulled, split uniformly).
double assignment_probability(const PosteriorState& state, const PolicySpec& spec);

// Draws the arm actually pulled, consuming randomness from `stream`.
int draw_arm(const PosteriorState& state, const PolicySpec& spec, RngStream& stream);

struct Selection {
  int arm;     // 1 or 2
  double pi1;  // assignment probability of arm 1 at the moment of selection
};

Selection select_arm(const PosteriorState& state, const PolicySpec& spec, RngStream& stream);

// Beta and gamma variates driven by RngStream (Marsaglia-Tsang for the gamma
// core). Deterministic given the stream state.
double sample_gamma(double shape, RngStream& stream);
double sample_beta(double alpha, double beta, RngStream& stream);

}  // namespace banditstat
