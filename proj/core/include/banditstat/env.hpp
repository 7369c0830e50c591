#pragma once

namespace banditstat {

// Two-arm Bernoulli environment: arm 1 pays 1 with probability p1, arm 2 with
// probability p2, over a fixed horizon of n pulls.
struct EnvSpec {
  double p1 = 0.5;
  double p2 = 0.5;
  int horizon = 0;

  // Throws std::invalid_argument if probabilities are outside [0, 1] or the
  // horizon is not positive.
  void validate() const;
};

}  // namespace banditstat
