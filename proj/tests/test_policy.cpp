#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "banditstat/policy.hpp"
#include "banditstat/rng.hpp"

using namespace banditstat;

namespace {

// Monte Carlo P(X > Y) via the standard library's generators, independent of
// the library's own sampling path.
double mc_prob_greater(const BetaParams& a, const BetaParams& b, int draws, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::gamma_distribution<double> ga1(a.alpha, 1.0), ga2(a.beta, 1.0);
  std::gamma_distribution<double> gb1(b.alpha, 1.0), gb2(b.beta, 1.0);
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    double x1 = ga1(gen);
    double x = x1 / (x1 + ga2(gen));
    double y1 = gb1(gen);
    double y = y1 / (y1 + gb2(gen));
    if (x > y) ++hits;
  }
  return static_cast<double>(hits) / draws;
}

PolicySpec ts_spec(double a = 1.0, double b = 1.0, double w = 1.0) {
  PolicySpec spec;
  spec.kind = PolicyKind::ThompsonSampling;
  spec.ts_prior_alpha = a;
  spec.ts_prior_beta = b;
  spec.ts_update_weight = w;
  return spec;
}

PolicySpec eg_spec(double eps = 0.1) {
  PolicySpec spec;
  spec.kind = PolicyKind::EpsilonGreedy;
  spec.eg_epsilon = eps;
  return spec;
}

}  // namespace

TEST_CASE("posterior_prob_optimal on symmetric posteriors is exactly one half") {
  CHECK(posterior_prob_optimal({1, 1}, {1, 1}) == 0.5);
  CHECK(posterior_prob_optimal({5, 5}, {5, 5}) == 0.5);
  CHECK(posterior_prob_optimal({0.5, 0.5}, {0.5, 0.5}) == 0.5);
}

TEST_CASE("posterior_prob_optimal closed-form values") {
  CHECK(posterior_prob_optimal({2, 1}, {1, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(posterior_prob_optimal({1, 2}, {1, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  // P(X > Y) + P(Y > X) = 1 for continuous posteriors.
  double p = posterior_prob_optimal({3, 7}, {4, 2});
  double q = posterior_prob_optimal({4, 2}, {3, 7});
  CHECK(p + q == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("posterior_prob_optimal matches an independent Monte Carlo oracle") {
  BetaParams a{40, 60};
  BetaParams b{30, 70};
  double mc = mc_prob_greater(a, b, 400000, 12345);
  CHECK(std::fabs(posterior_prob_optimal(a, b) - mc) < 0.004);

  BetaParams c{2.5, 4.5};
  BetaParams d{3.0, 2.0};
  double mc2 = mc_prob_greater(c, d, 400000, 777);
  CHECK(std::fabs(posterior_prob_optimal(c, d) - mc2) < 0.004);
}

TEST_CASE("closed-form sum and quadrature agree to 1e-9") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> shape(1, 500);
  for (int rep = 0; rep < 40; ++rep) {
    BetaParams a{static_cast<double>(shape(gen)), static_cast<double>(shape(gen))};
    BetaParams b{static_cast<double>(shape(gen)), static_cast<double>(shape(gen))};
    double fast = posterior_prob_optimal(a, b);
    double quad = detail::posterior_prob_optimal_quadrature(a, b);
    CHECK(std::fabs(fast - quad) < 1e-9);
  }
}

TEST_CASE("complement identity holds for non-integer parameters") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> shape(0.3, 80.0);
  for (int rep = 0; rep < 25; ++rep) {
    BetaParams a{shape(gen), shape(gen)};
    BetaParams b{shape(gen), shape(gen)};
    double p = posterior_prob_optimal(a, b);
    double q = posterior_prob_optimal(b, a);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(std::fabs(p + q - 1.0) < 1e-9);
  }
}

TEST_CASE("posterior_prob_optimal rejects invalid parameters") {
  CHECK_THROWS_AS(posterior_prob_optimal({0, 1}, {1, 1}), std::domain_error);
  CHECK_THROWS_AS(posterior_prob_optimal({1, -2}, {1, 1}), std::domain_error);
  CHECK_THROWS_AS(posterior_prob_optimal({1, 1}, {std::nan(""), 1}), std::domain_error);
}

TEST_CASE("ts_update accumulates weighted pseudo-counts") {
  PolicySpec spec = ts_spec();
  PosteriorState state = initial_state(spec);
  PosteriorState after = ts_update(state, 1, 1, 1.0);
  CHECK(after.posterior[0].alpha == 2.0);
  CHECK(after.posterior[0].beta == 1.0);
  CHECK(after.posterior[1].alpha == 1.0);
  CHECK(after.pulls[0] == 1);
  CHECK(after.successes[0] == 1);

  PosteriorState deployed = initial_state(ts_spec(19, 1, 10));
  PosteriorState failed = ts_update(deployed, 2, 0, 10.0);
  CHECK(failed.posterior[1].alpha == 19.0);
  CHECK(failed.posterior[1].beta == 11.0);
  CHECK(failed.pulls[1] == 1);
  CHECK(failed.successes[1] == 0);
}

TEST_CASE("a weight-w update equals w unit updates of the posterior") {
  PosteriorState state = initial_state(ts_spec());
  PosteriorState once = ts_update(state, 1, 1, 10.0);
  PosteriorState tenfold = state;
  for (int i = 0; i < 10; ++i) tenfold = ts_update(tenfold, 1, 1, 1.0);
  CHECK(once.posterior[0].alpha == tenfold.posterior[0].alpha);
  CHECK(once.posterior[0].beta == tenfold.posterior[0].beta);
  // Pull counts differ by construction: one observation vs ten.
  CHECK(once.pulls[0] == 1);
  CHECK(tenfold.pulls[0] == 10);
}

TEST_CASE("ts_update validates arguments") {
  PosteriorState state = initial_state(ts_spec());
  CHECK_THROWS_AS(ts_update(state, 3, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ts_update(state, 1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ts_update(state, 1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("weight conservation: alpha_k + beta_k tracks w times the pulls") {
  PolicySpec spec = ts_spec(19, 1, 10);
  PosteriorState state = initial_state(spec);
  RngStream stream = derive_stream(5, 0, 0);
  for (int t = 0; t < 200; ++t) {
    int arm = draw_arm(state, spec, stream);
    int reward = bernoulli_draw(0.3, stream);
    state = ts_update(state, arm, reward, spec.ts_update_weight);
  }
  for (int k = 0; k < 2; ++k) {
    double budget = state.posterior[k].alpha + state.posterior[k].beta;
    CHECK(budget == 20.0 + 10.0 * static_cast<double>(state.pulls[k]));
    CHECK(state.posterior[k].alpha == 19.0 + 10.0 * static_cast<double>(state.successes[k]));
  }
  CHECK(state.pulls[0] + state.pulls[1] == 200);
}

TEST_CASE("uniform random assignment probability is one half") {
  PolicySpec spec;
  PosteriorState state = initial_state(spec);
  CHECK(assignment_probability(state, spec) == 0.5);
}

TEST_CASE("epsilon-greedy assignment probabilities") {
  PolicySpec spec = eg_spec(0.1);
  PosteriorState state = initial_state(spec);

  SUBCASE("no data: uniform tie") { CHECK(assignment_probability(state, spec) == 0.5); }

  SUBCASE("unique leader gets 1 - eps/2") {
    state = record_outcome(state, 1, 1);
    state = record_outcome(state, 2, 0);
    CHECK(assignment_probability(state, spec) == doctest::Approx(0.95).epsilon(1e-12));
    state = record_outcome(state, 1, 0);  // means 1/2 vs 0/1, arm 1 still leads
    CHECK(assignment_probability(state, spec) == doctest::Approx(0.95).epsilon(1e-12));
  }

  SUBCASE("unpulled arm ties with the empirical leader") {
    state = record_outcome(state, 2, 1);
    CHECK(assignment_probability(state, spec) == 0.5);
  }

  SUBCASE("equal means tie regardless of sample size") {
    state = record_outcome(state, 1, 1);
    state = record_outcome(state, 1, 0);
    state = record_outcome(state, 2, 1);
    state = record_outcome(state, 2, 0);
    state = record_outcome(state, 2, 1);
    state = record_outcome(state, 2, 0);
    // 1/2 vs 2/4: identical rationals give identical doubles.
    CHECK(assignment_probability(state, spec) == 0.5);
  }

  SUBCASE("trailing arm gets eps/2") {
    state = record_outcome(state, 1, 0);
    state = record_outcome(state, 2, 1);
    CHECK(assignment_probability(state, spec) == doctest::Approx(0.05).epsilon(1e-12));
  }
}

TEST_CASE("epsilon-greedy over a trial only emits its three probability levels") {
  PolicySpec spec = eg_spec(0.1);
  PosteriorState state = initial_state(spec);
  RngStream stream = derive_stream(31, 0, 0);
  for (int t = 0; t < 500; ++t) {
    double pi1 = assignment_probability(state, spec);
    bool known = std::fabs(pi1 - 0.05) < 1e-12 || std::fabs(pi1 - 0.5) < 1e-12 ||
                 std::fabs(pi1 - 0.95) < 1e-12;
    CHECK(known);
    int arm = draw_arm(state, spec, stream);
    state = record_outcome(state, arm, bernoulli_draw(0.4, stream));
  }
}

TEST_CASE("select_arm reports the symmetric Thompson probability exactly") {
  PolicySpec spec = ts_spec();
  PosteriorState state = initial_state(spec);
  RngStream stream = derive_stream(1, 2, 3);
  Selection sel = select_arm(state, spec, stream);
  CHECK(sel.pi1 == 0.5);
  CHECK((sel.arm == 1 || sel.arm == 2));
}

TEST_CASE("Thompson selection frequency matches the reported probability") {
  struct Fixture {
    BetaParams a, b;
  };
  const Fixture fixtures[] = {
      {{2, 1}, {1, 1}}, {{5, 5}, {5, 5}}, {{10, 3}, {4, 9}}, {{30, 70}, {40, 60}}, {{1, 4}, {2, 2}},
  };
  int which = 0;
  for (const Fixture& fx : fixtures) {
    PolicySpec spec = ts_spec();
    PosteriorState state = initial_state(spec);
    state.posterior[0] = fx.a;
    state.posterior[1] = fx.b;
    double pi1 = assignment_probability(state, spec);
    RngStream stream = derive_stream(123, 9, static_cast<std::uint64_t>(which++));
    int n = 100000;
    int picks = 0;
    for (int i = 0; i < n; ++i) {
      if (draw_arm(state, spec, stream) == 1) ++picks;
    }
    double freq = static_cast<double>(picks) / n;
    double se = std::sqrt(std::max(pi1 * (1.0 - pi1), 1e-6) / n);
    CHECK(std::fabs(freq - pi1) < 4.0 * se);
  }
}

TEST_CASE("sample_beta has the right first moment") {
  RngStream stream = derive_stream(77, 0, 0);
  int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sample_beta(3.0, 7.0, stream);
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  double se = std::sqrt(0.3 * 0.7 / 11.0 / n);
  CHECK(std::fabs(sum / n - 0.3) < 4.0 * se);
}

TEST_CASE("sample_gamma covers the sub-unit shape branch") {
  RngStream stream = derive_stream(78, 0, 0);
  int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = sample_gamma(0.5, stream);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  double se = std::sqrt(0.5 / n);
  CHECK(std::fabs(sum / n - 0.5) < 4.0 * se);
  CHECK_THROWS_AS(sample_gamma(0.0, stream), std::domain_error);
}

TEST_CASE("policy labels and parsing round-trip") {
  CHECK(PolicySpec{}.label() == "ur");
  CHECK(ts_spec().label() == "ts(1,1)");
  CHECK(ts_spec(19, 1, 10).label() == "ts(19,1;w=10)");
  CHECK(ts_spec(0.5, 0.5).label() == "ts(0.5,0.5)");
  CHECK(eg_spec(0.1).label() == "eg(0.1)");

  CHECK(parse_policy_spec("ur").kind == PolicyKind::UniformRandom);
  PolicySpec ts = parse_policy_spec("ts:19,1,10");
  CHECK(ts.kind == PolicyKind::ThompsonSampling);
  CHECK(ts.ts_prior_alpha == 19.0);
  CHECK(ts.ts_prior_beta == 1.0);
  CHECK(ts.ts_update_weight == 10.0);
  CHECK(parse_policy_spec("ts").ts_prior_alpha == 1.0);
  CHECK(parse_policy_spec("ts:0.5,0.5").ts_prior_beta == 0.5);
  CHECK(parse_policy_spec("eg:0.2").eg_epsilon == 0.2);

  CHECK_THROWS_AS(parse_policy_spec("xx"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("ts:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("eg:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("ts:0,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy_spec("ur:1"), std::invalid_argument);
}
