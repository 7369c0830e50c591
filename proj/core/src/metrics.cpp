#include "banditstat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace banditstat {
namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
  int count = 0;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  m.count = static_cast<int>(xs.size());
  if (m.count == 0) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / m.count;
  if (m.count > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / (m.count - 1)) / std::sqrt(static_cast<double>(m.count));
  }
  return m;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

RateSummary reject_rate_summary(std::span<const TestOutcome> outcomes) {
  if (outcomes.empty()) {
    throw std::invalid_argument("reject_rate_summary: empty outcome list");
  }
  RateSummary s;
  s.n_sims = static_cast<int>(outcomes.size());
  int rejections = 0;
  for (const TestOutcome& o : outcomes) {
    if (o.test != outcomes.front().test || o.params != outcomes.front().params) {
      throw std::invalid_argument("reject_rate_summary: outcomes mix different tests");
    }
    if (o.undefined) {
      ++s.undefined_count;
      continue;
    }
    if (o.reject) ++rejections;
  }
  s.rate = static_cast<double>(rejections) / s.n_sims;
  s.se = std::sqrt(s.rate * (1.0 - s.rate) / s.n_sims);
  return s;
}

std::array<double, 5> assignment_prob_histogram(std::span<const double> final_pi1) {
  if (final_pi1.empty()) {
    throw std::invalid_argument("assignment_prob_histogram: empty input");
  }
  std::array<double, 5> bins{};
  for (double pi1 : final_pi1) {
    if (!(pi1 >= 0.0 && pi1 <= 1.0)) {
      throw std::invalid_argument("assignment_prob_histogram: probability outside [0, 1]");
    }
    double top = std::max(pi1, 1.0 - pi1);
    int b = static_cast<int>((top - 0.5) / 0.1);
    if (b > 4) b = 4;  // top == 1.0 belongs to the closed last bin
    bins[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& b : bins) b /= static_cast<double>(final_pi1.size());
  return bins;
}

std::vector<DiagnosticsRow> bias_table(std::span<const Estimate> estimates,
                                       std::span<const std::optional<double>> wald_stats,
                                       const EnvSpec& env) {
  env.validate();
  if (estimates.empty()) throw std::invalid_argument("bias_table: no estimates");
  EstimatorMethod method = estimates.front().method;
  std::vector<double> p1s, p2s, diffs, abs_diffs, walds;
  for (const Estimate& e : estimates) {
    if (e.method != method) throw std::invalid_argument("bias_table: estimates mix methods");
    if (!e.defined()) continue;
    p1s.push_back(*e.p1);
    p2s.push_back(*e.p2);
    diffs.push_back(*e.p1 - *e.p2);
    abs_diffs.push_back(std::fabs(*e.p1 - *e.p2));
  }
  for (const auto& w : wald_stats) {
    if (w.has_value()) walds.push_back(*w);
  }
  if (p1s.empty()) throw std::invalid_argument("bias_table: no defined estimates");

  Moments wm = moments(walds);
  double wmed = walds.empty() ? 0.0 : median(walds);
  auto make_row = [&](const char* arm, std::span<const double> xs, double truth) {
    Moments m = moments(xs);
    DiagnosticsRow row;
    row.method = method;
    row.arm = arm;
    row.mean_estimate = m.mean;
    row.bias = m.mean - truth;
    row.se_estimate = m.se;
    row.mean_wald = wm.mean;
    row.median_wald = wmed;
    row.se_wald = wm.se;
    return row;
  };
  std::vector<DiagnosticsRow> rows;
  rows.push_back(make_row("1", p1s, env.p1));
  rows.push_back(make_row("2", p2s, env.p2));
  rows.push_back(make_row("diff", diffs, env.p1 - env.p2));
  rows.push_back(make_row("abs_diff", abs_diffs, std::fabs(env.p1 - env.p2)));
  return rows;
}

RewardSummary mean_reward_summary(std::span<const double> per_trial_mean_reward) {
  if (per_trial_mean_reward.empty()) {
    throw std::invalid_argument("mean_reward_summary: empty input");
  }
  Moments m = moments(per_trial_mean_reward);
  return {m.mean, m.se};
}

int required_sample_size(double p1, double p2, double alpha, double power) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("required_sample_size: probabilities must lie in [0, 1]");
  }
  if (p1 == p2) {
    throw std::invalid_argument("required_sample_size: effect size must be nonzero");
  }
  if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0)) {
    throw std::invalid_argument("required_sample_size: alpha and power must lie in (0, 1)");
  }
  boost::math::normal_distribution<double> dist;
  double z_alpha = boost::math::quantile(dist, 1.0 - alpha / 2.0);
  double z_power = boost::math::quantile(dist, power);
  double z = z_alpha + z_power;
  double var = p1 * (1.0 - p1) + p2 * (1.0 - p2);
  double diff = p1 - p2;
  double per_arm = std::ceil(z * z * var / (diff * diff));
  return 2 * static_cast<int>(per_arm);
}

}  // namespace banditstat
