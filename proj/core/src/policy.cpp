#include "banditstat/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "banditstat/detail/format.hpp"

namespace banditstat {
namespace {

double lbeta(double a, double b) {
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

bool small_integer(double v, long long& out) {
  if (!(v >= 1.0) || v > 2e4 || v != std::floor(v)) return false;
  out = static_cast<long long>(v);
  return true;
}

// P(X > Y) for X ~ Beta(a1, b1), Y ~ Beta(a2, b2) with integer a1, via the
// closed-form sum over a1 terms:
//   sum_{i=0}^{a1-1} B(a2+i, b1+b2) / ((b1+i) B(1+i, b1) B(a2, b2))
// evaluated with the term ratio
//   t_i/t_{i-1} = (a2+i-1)(b1+i-1) / ((a2+b1+b2+i-1) i).
double prob_greater_sum(long long a1, double b1, double a2, double b2) {
  double term = std::exp(lbeta(a2, b1 + b2) - lbeta(a2, b2));
  double total = term;
  for (long long i = 1; i < a1; ++i) {
    term *= (a2 + i - 1) * (b1 + i - 1) / ((a2 + b1 + b2 + i - 1) * i);
    total += term;
  }
  return total;
}

// General route: P(X > Y) = int_0^1 pdf_Y(y) (1 - I_y(a)) dy via tanh-sinh
// quadrature, which absorbs the endpoint singularities a Jeffreys prior
// produces (shape parameters below 1). Absolute accuracy ~1e-12 for shape
// parameters >= 0.05; the engine and the tests stay well inside that range.
double prob_greater_quadrature(const BetaParams& a, const BetaParams& b) {
  double lnorm = lbeta(b.alpha, b.beta);
  auto f = [&](double y, double yc) -> double {
    // |yc| is the distance to the nearest endpoint; unlike y itself it does
    // not round away near 0 and 1, so both log terms stay exact there.
    double d = std::fabs(yc);
    if (d == 0.0) return 0.0;
    bool right = y > 0.5;
    double x = right ? 1.0 - d : d;
    double ld = std::log(d);
    double lfar = std::log1p(-d);
    double v = (b.alpha - 1.0) * (right ? lfar : ld) + (b.beta - 1.0) * (right ? ld : lfar) -
               lnorm;
    if (v > 690.0) v = 690.0;  // only reachable below the supported shape range
    double tail = boost::math::ibetac(a.alpha, a.beta, x);
    if (tail <= 0.0) return 0.0;
    return std::exp(v) * tail;
  };
  boost::math::quadrature::tanh_sinh<double> integrator(12);
  double v = integrator.integrate(f, 0.0, 1.0, 1e-11);
  return std::clamp(v, 0.0, 1.0);
}

double parse_number(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("policy spec: bad ") + what + " '" + text + "'");
  }
  if (pos != text.size()) {
    throw std::invalid_argument(std::string("policy spec: bad ") + what + " '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

}  // namespace

namespace detail {
double posterior_prob_optimal_quadrature(const BetaParams& a, const BetaParams& b) {
  return prob_greater_quadrature(a, b);
}
}  // namespace detail

void PolicySpec::validate() const {
  switch (kind) {
    case PolicyKind::UniformRandom:
      return;
    case PolicyKind::ThompsonSampling:
      if (!(ts_prior_alpha > 0.0) || !std::isfinite(ts_prior_alpha) ||
          !(ts_prior_beta > 0.0) || !std::isfinite(ts_prior_beta)) {
        throw std::invalid_argument("PolicySpec: TS prior parameters must be positive");
      }
      if (!(ts_update_weight > 0.0) || !std::isfinite(ts_update_weight)) {
        throw std::invalid_argument("PolicySpec: TS update weight must be positive");
      }
      return;
    case PolicyKind::EpsilonGreedy:
      if (!(eg_epsilon >= 0.0 && eg_epsilon <= 1.0)) {
        throw std::invalid_argument("PolicySpec: epsilon must lie in [0, 1]");
      }
      return;
  }
  throw std::invalid_argument("PolicySpec: unknown policy kind");
}

std::string PolicySpec::label() const {
  using detail::format_double;
  switch (kind) {
    case PolicyKind::UniformRandom:
      return "ur";
    case PolicyKind::ThompsonSampling: {
      std::string s = "ts(" + format_double(ts_prior_alpha) + "," + format_double(ts_prior_beta);
      if (ts_update_weight != 1.0) s += ";w=" + format_double(ts_update_weight);
      return s + ")";
    }
    case PolicyKind::EpsilonGreedy:
      return "eg(" + format_double(eg_epsilon) + ")";
  }
  return "?";
}

PolicySpec parse_policy_spec(const std::string& text) {
  PolicySpec spec;
  std::string head = text;
  std::string args;
  if (auto at = text.find(':'); at != std::string::npos) {
    head = text.substr(0, at);
    args = text.substr(at + 1);
  }
  if (head == "ur") {
    if (!args.empty()) throw std::invalid_argument("policy spec: 'ur' takes no parameters");
    spec.kind = PolicyKind::UniformRandom;
  } else if (head == "ts") {
    spec.kind = PolicyKind::ThompsonSampling;
    if (!args.empty()) {
      auto parts = split(args, ',');
      if (parts.size() != 2 && parts.size() != 3) {
        throw std::invalid_argument("policy spec: expected ts:alpha,beta[,weight]");
      }
      spec.ts_prior_alpha = parse_number(parts[0], "prior alpha");
      spec.ts_prior_beta = parse_number(parts[1], "prior beta");
      if (parts.size() == 3) spec.ts_update_weight = parse_number(parts[2], "update weight");
    }
  } else if (head == "eg") {
    spec.kind = PolicyKind::EpsilonGreedy;
    if (!args.empty()) spec.eg_epsilon = parse_number(args, "epsilon");
  } else {
    throw std::invalid_argument("policy spec: unknown policy '" + text + "'");
  }
  spec.validate();
  return spec;
}

PosteriorState initial_state(const PolicySpec& spec) {
  PosteriorState state;
  state.posterior[0] = {spec.ts_prior_alpha, spec.ts_prior_beta};
  state.posterior[1] = {spec.ts_prior_alpha, spec.ts_prior_beta};
  return state;
}

double posterior_prob_optimal(const BetaParams& a, const BetaParams& b) {
  if (!(a.alpha > 0.0) || !(a.beta > 0.0) || !(b.alpha > 0.0) || !(b.beta > 0.0) ||
      !std::isfinite(a.alpha) || !std::isfinite(a.beta) || !std::isfinite(b.alpha) ||
      !std::isfinite(b.beta)) {
    throw std::domain_error("posterior_prob_optimal: Beta parameters must be positive and finite");
  }
  if (a.alpha == b.alpha && a.beta == b.beta) return 0.5;

  // Four equivalent orientations; each needs a different parameter to be a
  // small integer. P(X>Y) = 1 - P(Y>X) = P(1-Y > 1-X).
  double best = std::numeric_limits<double>::infinity();
  int which = -1;
  auto consider = [&](int id, double v) {
    long long t;
    if (small_integer(v, t) && v < best) {
      best = v;
      which = id;
    }
  };
  consider(0, a.alpha);
  consider(1, b.alpha);
  consider(2, b.beta);
  consider(3, a.beta);
  switch (which) {
    case 0:
      return std::clamp(prob_greater_sum(static_cast<long long>(a.alpha), a.beta, b.alpha, b.beta),
                        0.0, 1.0);
    case 1:
      return std::clamp(
          1.0 - prob_greater_sum(static_cast<long long>(b.alpha), b.beta, a.alpha, a.beta), 0.0,
          1.0);
    case 2:
      return std::clamp(prob_greater_sum(static_cast<long long>(b.beta), b.alpha, a.beta, a.alpha),
                        0.0, 1.0);
    case 3:
      return std::clamp(
          1.0 - prob_greater_sum(static_cast<long long>(a.beta), a.alpha, b.beta, b.alpha), 0.0,
          1.0);
    default:
      return prob_greater_quadrature(a, b);
  }
}

PosteriorState ts_update(const PosteriorState& state, int arm, int reward, double w) {
  if (arm != 1 && arm != 2) throw std::invalid_argument("ts_update: arm must be 1 or 2");
  if (reward != 0 && reward != 1) throw std::invalid_argument("ts_update: reward must be 0 or 1");
  if (!(w > 0.0)) throw std::invalid_argument("ts_update: weight must be positive");
  PosteriorState next = state;
  int k = arm - 1;
  next.posterior[k].alpha += w * reward;
  next.posterior[k].beta += w * (1 - reward);
  next.pulls[k] += 1;
  next.successes[k] += reward;
  return next;
}

PosteriorState record_outcome(const PosteriorState& state, int arm, int reward) {
  if (arm != 1 && arm != 2) throw std::invalid_argument("record_outcome: arm must be 1 or 2");
  if (reward != 0 && reward != 1) {
    throw std::invalid_argument("record_outcome: reward must be 0 or 1");
  }
  PosteriorState next = state;
  next.pulls[arm - 1] += 1;
  next.successes[arm - 1] += reward;
  return next;
}

namespace {

// Greedy candidate set for epsilon-greedy: arms never pulled are treated as
// tied with the best empirical mean, and exact ties are split uniformly.
std::pair<bool, bool> greedy_candidates(const PosteriorState& state) {
  if (state.pulls[0] == 0 || state.pulls[1] == 0) return {true, true};
  double m1 = static_cast<double>(state.successes[0]) / static_cast<double>(state.pulls[0]);
  double m2 = static_cast<double>(state.successes[1]) / static_cast<double>(state.pulls[1]);
  if (m1 == m2) return {true, true};
  return {m1 > m2, m2 > m1};
}

}  // namespace

double assignment_probability(const PosteriorState& state, const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicyKind::UniformRandom:
      return 0.5;
    case PolicyKind::ThompsonSampling:
      return posterior_prob_optimal(state.posterior[0], state.posterior[1]);
    case PolicyKind::EpsilonGreedy: {
      auto [c1, c2] = greedy_candidates(state);
      double g1 = (c1 && c2) ? 0.5 : (c1 ? 1.0 : 0.0);
      return spec.eg_epsilon / 2.0 + (1.0 - spec.eg_epsilon) * g1;
    }
  }
  throw std::invalid_argument("assignment_probability: unknown policy kind");
}

int draw_arm(const PosteriorState& state, const PolicySpec& spec, RngStream& stream) {
  switch (spec.kind) {
    case PolicyKind::UniformRandom:
      return stream.next_uniform() < 0.5 ? 1 : 2;
    case PolicyKind::ThompsonSampling: {
      double t1 = sample_beta(state.posterior[0].alpha, state.posterior[0].beta, stream);
      double t2 = sample_beta(state.posterior[1].alpha, state.posterior[1].beta, stream);
      return t1 > t2 ? 1 : 2;
    }
    case PolicyKind::EpsilonGreedy: {
      if (stream.next_uniform() < spec.eg_epsilon) {
        return stream.next_uniform() < 0.5 ? 1 : 2;
      }
      auto [c1, c2] = greedy_candidates(state);
      if (c1 && c2) return stream.next_uniform() < 0.5 ? 1 : 2;
      return c1 ? 1 : 2;
    }
  }
  throw std::invalid_argument("draw_arm: unknown policy kind");
}

Selection select_arm(const PosteriorState& state, const PolicySpec& spec, RngStream& stream) {
  double pi1 = assignment_probability(state, spec);
  int arm = draw_arm(state, spec, stream);
  return {arm, pi1};
}

namespace {

double sample_normal(RngStream& stream) {
  double u1 = 1.0 - stream.next_uniform();
  double u2 = stream.next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace

double sample_gamma(double shape, RngStream& stream) {
  if (!(shape > 0.0)) throw std::domain_error("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    double u = 1.0 - stream.next_uniform();
    return sample_gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_normal(stream);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = 1.0 - stream.next_uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(double alpha, double beta, RngStream& stream) {
  double x = sample_gamma(alpha, stream);
  double y = sample_gamma(beta, stream);
  return x / (x + y);
}

}  // namespace banditstat
