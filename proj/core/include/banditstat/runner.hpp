#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "banditstat/engine.hpp"
#include "banditstat/estimators.hpp"

namespace banditstat {

// Everything retained per simulation. Counts are sufficient to rebuild the
// MLE and every count-based test; the IPW estimate is folded in during the
// run because it needs per-step assignment probabilities.
struct SimStats {
  ArmCounts counts;
  double final_pi1 = 0.5;
  double mean_reward = 0.0;
  std::optional<double> ipw_p1;
  std::optional<double> ipw_p2;
};

Estimate ipw_estimate_of(const SimStats& s);

struct CellData {
  EnvSpec env;
  PolicySpec policy;
  int n_sims = 0;
  std::uint64_t base_seed = 0;
  std::uint64_t cell_id = 0;
  std::vector<SimStats> sims;  // indexed by sim_index; independent of scheduling
};

// Runs n_sims independent trials of (env, policy). Simulation i draws from
// derive_stream(base_seed, cell_id, i), so results are identical for any
// worker count.
CellData simulate_cell(const EnvSpec& env, const PolicySpec& policy, int n_sims,
                       std::uint64_t base_seed, std::uint64_t cell_id, int workers = 0);

}  // namespace banditstat
