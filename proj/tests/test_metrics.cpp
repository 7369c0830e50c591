#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "banditstat/metrics.hpp"

using namespace banditstat;

namespace {

TestOutcome outcome(bool reject, bool undefined = false) {
  TestOutcome out;
  out.test = "wald";
  out.params = "crit=1.96";
  out.reject = reject;
  out.undefined = undefined;
  return out;
}

}  // namespace

TEST_CASE("reject rate summary on a small batch") {
  std::vector<TestOutcome> outcomes;
  for (int i = 0; i < 13; ++i) outcomes.push_back(outcome(i < 13));
  for (int i = 0; i < 247; ++i) outcomes.push_back(outcome(false));
  RateSummary rs = reject_rate_summary(outcomes);
  CHECK(rs.n_sims == 260);
  CHECK(rs.rate == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(rs.se == doctest::Approx(std::sqrt(0.05 * 0.95 / 260.0)).epsilon(1e-12));
  CHECK(rs.undefined_count == 0);
}

TEST_CASE("reject rate of 5% over 5000 sims has the tabulated standard error") {
  std::vector<TestOutcome> outcomes;
  for (int i = 0; i < 5000; ++i) outcomes.push_back(outcome(i < 250));
  RateSummary rs = reject_rate_summary(outcomes);
  CHECK(rs.rate == 0.05);
  CHECK(rs.se == doctest::Approx(0.00308).epsilon(1e-2));
}

TEST_CASE("undefined outcomes stay in the denominator") {
  std::vector<TestOutcome> outcomes = {outcome(true), outcome(false, true), outcome(false),
                                       outcome(false, true)};
  RateSummary rs = reject_rate_summary(outcomes);
  CHECK(rs.rate == 0.25);
  CHECK(rs.undefined_count == 2);
  CHECK(rs.n_sims == 4);
}

TEST_CASE("all-non-reject batch gives zero rate and zero se") {
  std::vector<TestOutcome> outcomes(100, outcome(false));
  RateSummary rs = reject_rate_summary(outcomes);
  CHECK(rs.rate == 0.0);
  CHECK(rs.se == 0.0);
}

TEST_CASE("reject rate summary input validation") {
  CHECK_THROWS_AS(reject_rate_summary({}), std::invalid_argument);
  std::vector<TestOutcome> mixed = {outcome(true), outcome(false)};
  mixed[1].test = "welch";
  CHECK_THROWS_AS(reject_rate_summary(mixed), std::invalid_argument);
}

TEST_CASE("assignment histogram folds and bins final probabilities") {
  std::vector<double> ur(40, 0.5);
  auto bins = assignment_prob_histogram(ur);
  CHECK(bins[0] == 1.0);
  for (int i = 1; i < 5; ++i) CHECK(bins[i] == 0.0);

  std::vector<double> mix = {0.05, 0.55, 0.65, 0.85, 1.0, 0.95, 0.12, 0.9};
  bins = assignment_prob_histogram(mix);
  // folded: 0.95, 0.55, 0.65, 0.85, 1.0, 0.95, 0.88, 0.9
  CHECK(bins[0] == doctest::Approx(1.0 / 8.0));
  CHECK(bins[1] == doctest::Approx(1.0 / 8.0));
  CHECK(bins[2] == 0.0);
  CHECK(bins[3] == doctest::Approx(2.0 / 8.0));
  CHECK(bins[4] == doctest::Approx(4.0 / 8.0));
  double total = 0.0;
  for (double b : bins) total += b;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("assignment histogram places the boundary value in the closed last bin") {
  std::vector<double> edge = {1.0, 0.0};
  auto bins = assignment_prob_histogram(edge);
  CHECK(bins[4] == 1.0);
  CHECK_THROWS_AS(assignment_prob_histogram({}), std::invalid_argument);
  std::vector<double> bad = {1.2};
  CHECK_THROWS_AS(assignment_prob_histogram(bad), std::invalid_argument);
}

TEST_CASE("bias table reports means, bias and spread per method") {
  EnvSpec env{0.5, 0.5, 100};
  std::vector<Estimate> estimates;
  std::vector<std::optional<double>> walds;
  // Two defined MLE estimates straddling the truth, one undefined.
  estimates.push_back({EstimatorMethod::MLE, 0.45, 0.55});
  walds.push_back(-1.0);
  estimates.push_back({EstimatorMethod::MLE, 0.55, 0.45});
  walds.push_back(3.0);
  estimates.push_back({EstimatorMethod::MLE, std::nullopt, 0.5});
  walds.push_back(std::nullopt);

  auto rows = bias_table(estimates, walds, env);
  REQUIRE(rows.size() == 4);  // arms 1, 2, diff, abs_diff for one method
  const DiagnosticsRow* arm1 = nullptr;
  const DiagnosticsRow* diff = nullptr;
  const DiagnosticsRow* abs_diff = nullptr;
  for (const auto& row : rows) {
    if (row.arm == "1") arm1 = &row;
    if (row.arm == "diff") diff = &row;
    if (row.arm == "abs_diff") abs_diff = &row;
  }
  REQUIRE(arm1 != nullptr);
  CHECK(arm1->mean_estimate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(arm1->bias == doctest::Approx(0.0).epsilon(1e-12));
  // SD of {0.45, 0.55} is 0.0707..., se over 2 trials halves that again.
  CHECK(arm1->se_estimate == doctest::Approx(0.05).epsilon(1e-9));
  REQUIRE(diff != nullptr);
  CHECK(diff->mean_estimate == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(abs_diff != nullptr);
  CHECK(abs_diff->mean_estimate == doctest::Approx(0.1).epsilon(1e-12));
  // Wald moments: mean of {-1, 3} = 1, median = 1.
  CHECK(arm1->mean_wald == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(arm1->median_wald == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bias table takes one estimator method per call") {
  EnvSpec env{0.55, 0.45, 100};
  std::vector<Estimate> ipw = {
      {EstimatorMethod::IPW, 0.6, 0.4},
      {EstimatorMethod::IPW, 0.5, 0.5},
  };
  std::vector<std::optional<double>> walds = {2.0, 2.5};
  auto rows = bias_table(ipw, walds, env);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) CHECK(row.method == EstimatorMethod::IPW);

  std::vector<Estimate> mixed = {
      {EstimatorMethod::MLE, 0.5, 0.5},
      {EstimatorMethod::IPW, 0.6, 0.4},
  };
  CHECK_THROWS_AS(bias_table(mixed, walds, env), std::invalid_argument);
}

TEST_CASE("bias table refuses a batch with no defined estimates") {
  EnvSpec env{0.5, 0.5, 100};
  std::vector<Estimate> estimates = {{EstimatorMethod::MLE, std::nullopt, std::nullopt}};
  std::vector<std::optional<double>> walds = {std::nullopt};
  CHECK_THROWS_AS(bias_table(estimates, walds, env), std::invalid_argument);
}

TEST_CASE("median of an even batch is the midpoint") {
  EnvSpec env{0.5, 0.5, 100};
  std::vector<Estimate> estimates(4, Estimate{EstimatorMethod::MLE, 0.5, 0.5});
  std::vector<std::optional<double>> walds = {1.0, 2.0, 10.0, 4.0};
  auto rows = bias_table(estimates, walds, env);
  CHECK(rows[0].median_wald == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mean reward summary") {
  std::vector<double> rewards = {0.5, 0.5, 0.5};
  RewardSummary rs = mean_reward_summary(rewards);
  CHECK(rs.mean == 0.5);
  CHECK(rs.se == 0.0);

  std::vector<double> spread = {0.4, 0.6};
  rs = mean_reward_summary(spread);
  CHECK(rs.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rs.se == doctest::Approx(0.1).epsilon(1e-9));
  CHECK_THROWS_AS(mean_reward_summary({}), std::invalid_argument);
}

TEST_CASE("required sample size reproduces the design point") {
  int total = required_sample_size(0.55, 0.45, 0.05, 0.80);
  CHECK(total == 778);
  // Within about 1% of the horizon used throughout the tables.
  CHECK(std::fabs(total - 785.0) / 785.0 < 0.01);
  CHECK(required_sample_size(0.45, 0.55, 0.05, 0.80) == total);
}

TEST_CASE("required sample size grows with shrinking effects and stricter power") {
  CHECK(required_sample_size(0.52, 0.48, 0.05, 0.80) >
        required_sample_size(0.55, 0.45, 0.05, 0.80));
  CHECK(required_sample_size(0.55, 0.45, 0.05, 0.90) >
        required_sample_size(0.55, 0.45, 0.05, 0.80));
  CHECK(required_sample_size(0.55, 0.45, 0.01, 0.80) >
        required_sample_size(0.55, 0.45, 0.05, 0.80));
  CHECK_THROWS_AS(required_sample_size(0.5, 0.5, 0.05, 0.80), std::invalid_argument);
  CHECK_THROWS_AS(required_sample_size(0.55, 0.45, 0.0, 0.80), std::invalid_argument);
}
