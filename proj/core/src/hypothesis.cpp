#include "banditstat/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "banditstat/detail/format.hpp"
#include "banditstat/detail/parallel.hpp"
#include "banditstat/errors.hpp"

namespace banditstat {
namespace {

double lbeta(double a, double b) {
  return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

double normal_two_sided_p(double z) {
  boost::math::normal_distribution<double> dist;
  return 2.0 * boost::math::cdf(dist, -std::fabs(z));
}

}  // namespace

std::optional<double> wald_statistic(const Estimate& est, const ArmCounts& counts) {
  if (!est.defined() || counts.n1 <= 0 || counts.n2 <= 0) return std::nullopt;
  double p1 = *est.p1;
  double p2 = *est.p2;
  double v = p1 * (1.0 - p1) / static_cast<double>(counts.n1) +
             p2 * (1.0 - p2) / static_cast<double>(counts.n2);
  if (!(v > 0.0)) return std::nullopt;
  return (p1 - p2) / std::sqrt(v);
}

TestOutcome wald_test(std::optional<double> statistic, double critical, const std::string& name) {
  if (!(critical > 0.0)) throw std::invalid_argument("wald_test: critical value must be positive");
  TestOutcome out;
  out.test = name;
  out.params = "crit=" + detail::format_double(critical);
  out.critical_lower = -critical;
  out.critical_upper = critical;
  if (!statistic.has_value()) {
    out.undefined = true;
    return out;
  }
  out.statistic = statistic;
  out.reject = *statistic < -critical || *statistic > critical;
  out.p_value = normal_two_sided_p(*statistic);
  return out;
}

TestOutcome wald_test(std::optional<double> statistic, const CriticalValues& critical,
                      const std::string& name) {
  if (!(critical.lower < critical.upper)) {
    throw std::invalid_argument("wald_test: calibrated bounds must satisfy lower < upper");
  }
  TestOutcome out;
  out.test = name;
  out.params = "lower=" + detail::format_double(critical.lower) +
               ";upper=" + detail::format_double(critical.upper);
  out.critical_lower = critical.lower;
  out.critical_upper = critical.upper;
  if (!statistic.has_value()) {
    out.undefined = true;
    return out;
  }
  out.statistic = statistic;
  out.reject = *statistic < critical.lower || *statistic > critical.upper;
  return out;
}

TestOutcome welch_test(const ArmCounts& counts, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("welch_test: alpha must lie in (0, 1)");
  }
  TestOutcome out;
  out.test = "welch";
  out.params = "alpha=" + detail::format_double(alpha);
  if (counts.n1 < 2 || counts.n2 < 2) {
    out.undefined = true;
    return out;
  }
  double n1 = static_cast<double>(counts.n1);
  double n2 = static_cast<double>(counts.n2);
  double p1 = static_cast<double>(counts.s1) / n1;
  double p2 = static_cast<double>(counts.s2) / n2;
  // Unbiased Bernoulli sample variance: n/(n-1) p(1-p).
  double v1 = n1 / (n1 - 1.0) * p1 * (1.0 - p1);
  double v2 = n2 / (n2 - 1.0) * p2 * (1.0 - p2);
  double se2 = v1 / n1 + v2 / n2;
  if (!(se2 > 0.0)) {
    out.undefined = true;
    return out;
  }
  double t = (p2 - p1) / std::sqrt(se2);
  double df = se2 * se2 /
              (v1 * v1 / (n1 * n1 * (n1 - 1.0)) + v2 * v2 / (n2 * n2 * (n2 - 1.0)));
  boost::math::students_t_distribution<double> dist(df);
  double crit = boost::math::quantile(dist, 1.0 - alpha / 2.0);
  out.statistic = t;
  out.critical_lower = -crit;
  out.critical_upper = crit;
  out.reject = t < -crit || t > crit;
  out.p_value = 2.0 * boost::math::cdf(dist, -std::fabs(t));
  return out;
}

double bayes_factor(const ArmCounts& counts, double prior_alpha, double prior_beta,
                    bool normalized) {
  if (!(prior_alpha > 0.0) || !(prior_beta > 0.0)) {
    throw std::invalid_argument("bayes_factor: prior parameters must be positive");
  }
  if (counts.n1 < 0 || counts.n2 < 0 || counts.s1 < 0 || counts.s2 < 0 || counts.s1 > counts.n1 ||
      counts.s2 > counts.n2) {
    throw std::invalid_argument("bayes_factor: malformed counts");
  }
  double s1 = static_cast<double>(counts.s1);
  double f1 = static_cast<double>(counts.n1 - counts.s1);
  double s2 = static_cast<double>(counts.s2);
  double f2 = static_cast<double>(counts.n2 - counts.s2);
  double log_bf = lbeta(prior_alpha + s1, prior_beta + f1) +
                  lbeta(prior_alpha + s2, prior_beta + f2) -
                  lbeta(2.0 * prior_alpha + s1 + s2, 2.0 * prior_beta + f1 + f2);
  if (normalized) {
    log_bf -= 2.0 * lbeta(prior_alpha, prior_beta) - lbeta(2.0 * prior_alpha, 2.0 * prior_beta);
  }
  return std::exp(log_bf);
}

TestOutcome bf_test(double bf, double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("bf_test: cutoff must be positive");
  if (!(bf >= 0.0)) throw std::invalid_argument("bf_test: Bayes factor must be non-negative");
  TestOutcome out;
  out.test = "bf";
  out.params = "cutoff=" + detail::format_double(cutoff);
  out.statistic = bf;
  out.reject = bf > cutoff;
  return out;
}

CriticalValues calibrate_critical_values(const EnvSpec& null_env, const PolicySpec& spec,
                                         int n_sims, double alpha, std::uint64_t base_seed,
                                         int workers) {
  null_env.validate();
  spec.validate();
  if (null_env.p1 != null_env.p2) {
    throw std::invalid_argument("calibrate_critical_values: env must be a null (p1 == p2)");
  }
  if (n_sims < 1000) {
    throw std::invalid_argument("calibrate_critical_values: need at least 1000 simulations");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("calibrate_critical_values: alpha must lie strictly in (0, 1)");
  }

  std::vector<double> stats(static_cast<std::size_t>(n_sims),
                            std::numeric_limits<double>::quiet_NaN());
  detail::parallel_for_index(n_sims, workers, [&](int i) {
    RngStream stream =
        derive_stream(base_seed, kCalibrationCellId, static_cast<std::uint64_t>(i));
    TrialResult res = run_trial_stream(null_env, spec, stream, [](const StepRecord&) {});
    auto z = wald_statistic(mle_estimate(res.counts), res.counts);
    if (z.has_value()) stats[static_cast<std::size_t>(i)] = *z;
  });

  std::vector<double> defined;
  defined.reserve(stats.size());
  for (double z : stats) {
    if (!std::isnan(z)) defined.push_back(z);
  }
  int excluded = n_sims - static_cast<int>(defined.size());
  if (static_cast<int>(defined.size()) < (n_sims + 1) / 2) {
    throw CalibrationError("calibrate_critical_values: only " + std::to_string(defined.size()) +
                           " of " + std::to_string(n_sims) + " statistics were defined");
  }
  std::sort(defined.begin(), defined.end());
  auto nearest_rank = [&](double q) {
    double m = static_cast<double>(defined.size());
    auto idx = static_cast<std::size_t>(std::ceil(q * m));
    if (idx > 0) --idx;
    if (idx >= defined.size()) idx = defined.size() - 1;
    return defined[idx];
  };
  CriticalValues cv;
  cv.lower = nearest_rank(alpha / 2.0);
  cv.upper = nearest_rank(1.0 - alpha / 2.0);
  cv.calibration_null_p = null_env.p1;
  cv.calibration_n = null_env.horizon;
  cv.calibration_sims = n_sims;
  cv.undefined_excluded = excluded;
  if (!(cv.lower < cv.upper)) {
    throw CalibrationError("calibrate_critical_values: degenerate bounds (lower >= upper)");
  }
  return cv;
}

}  // namespace banditstat
