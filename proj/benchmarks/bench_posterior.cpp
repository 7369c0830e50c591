#include <benchmark/benchmark.h>

#include "banditstat/engine.hpp"
#include "banditstat/policy.hpp"

using namespace banditstat;

static void BM_PosteriorProbIntegerSum(benchmark::State& state) {
  BetaParams a{static_cast<double>(state.range(0)), static_cast<double>(state.range(0)) + 3.0};
  BetaParams b{static_cast<double>(state.range(0)) + 1.0, static_cast<double>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior_prob_optimal(a, b));
  }
}
BENCHMARK(BM_PosteriorProbIntegerSum)->Arg(10)->Arg(100)->Arg(400);

static void BM_PosteriorProbQuadrature(benchmark::State& state) {
  // Half-integer parameters force the quadrature route.
  BetaParams a{state.range(0) + 0.5, state.range(0) + 3.5};
  BetaParams b{state.range(0) + 1.5, state.range(0) + 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior_prob_optimal(a, b));
  }
}
BENCHMARK(BM_PosteriorProbQuadrature)->Arg(10)->Arg(100)->Arg(400);

static void BM_TrackerSweep(benchmark::State& state) {
  PolicySpec spec;
  spec.kind = PolicyKind::ThompsonSampling;
  auto stream = derive_stream(1, 0, 0);
  for (auto _ : state) {
    auto tracker = detail::TsProbTracker::create(spec);
    double acc = 0.0;
    for (int t = 0; t < 785; ++t) {
      int arm = 1 + (t & 1);
      int reward = bernoulli_draw(0.5, stream);
      tracker->update(arm, reward);
      acc += tracker->prob();
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_TrackerSweep);
