#include "banditstat/runner.hpp"

#include <stdexcept>

#include "banditstat/detail/parallel.hpp"

namespace banditstat {

Estimate ipw_estimate_of(const SimStats& s) {
  Estimate est;
  est.method = EstimatorMethod::IPW;
  est.p1 = s.ipw_p1;
  est.p2 = s.ipw_p2;
  return est;
}

CellData simulate_cell(const EnvSpec& env, const PolicySpec& policy, int n_sims,
                       std::uint64_t base_seed, std::uint64_t cell_id, int workers) {
  env.validate();
  policy.validate();
  if (n_sims < 1) throw std::invalid_argument("simulate_cell: n_sims must be >= 1");

  CellData cell;
  cell.env = env;
  cell.policy = policy;
  cell.n_sims = n_sims;
  cell.base_seed = base_seed;
  cell.cell_id = cell_id;
  cell.sims.resize(static_cast<std::size_t>(n_sims));

  detail::parallel_for_index(n_sims, workers, [&](int i) {
    RngStream stream = derive_stream(base_seed, cell_id, static_cast<std::uint64_t>(i));
    IpwAccumulator ipw;
    TrialResult res =
        run_trial_stream(env, policy, stream, [&](const StepRecord& s) { ipw.add(s); });
    Estimate est = ipw.finish();
    SimStats& out = cell.sims[static_cast<std::size_t>(i)];
    out.counts = res.counts;
    out.final_pi1 = res.final_pi1;
    out.mean_reward = res.mean_reward;
    out.ipw_p1 = est.p1;
    out.ipw_p2 = est.p2;
  });
  return cell;
}

}  // namespace banditstat
