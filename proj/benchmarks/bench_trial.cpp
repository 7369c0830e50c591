#include <benchmark/benchmark.h>

#include "banditstat/engine.hpp"

using namespace banditstat;

namespace {

PolicySpec make_policy(int kind) {
  PolicySpec spec;
  switch (kind) {
    case 0:
      spec.kind = PolicyKind::UniformRandom;
      break;
    case 1:
      spec.kind = PolicyKind::ThompsonSampling;
      break;
    default:
      spec.kind = PolicyKind::EpsilonGreedy;
      break;
  }
  return spec;
}

}  // namespace

static void BM_RunTrial(benchmark::State& state) {
  EnvSpec env{0.5, 0.5, 785};
  PolicySpec spec = make_policy(static_cast<int>(state.range(0)));
  std::uint64_t sim = 0;
  for (auto _ : state) {
    RngStream stream = derive_stream(99, 0, sim++);
    TrialResult res = run_trial_stream(env, spec, stream, [](const StepRecord&) {});
    benchmark::DoNotOptimize(res);
  }
  state.SetItemsProcessed(state.iterations() * 785);
}
BENCHMARK(BM_RunTrial)->Arg(0)->Arg(1)->Arg(2);

static void BM_RunTrialJeffreysPrior(benchmark::State& state) {
  EnvSpec env{0.5, 0.5, 785};
  PolicySpec spec;
  spec.kind = PolicyKind::ThompsonSampling;
  spec.ts_prior_alpha = 0.5;
  spec.ts_prior_beta = 0.5;
  std::uint64_t sim = 0;
  for (auto _ : state) {
    RngStream stream = derive_stream(99, 1, sim++);
    TrialResult res = run_trial_stream(env, spec, stream, [](const StepRecord&) {});
    benchmark::DoNotOptimize(res);
  }
  state.SetItemsProcessed(state.iterations() * 785);
}
BENCHMARK(BM_RunTrialJeffreysPrior);
