#include "banditstat/env.hpp"

#include <stdexcept>
#include <string>

namespace banditstat {

void EnvSpec::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0)) {
    throw std::invalid_argument("EnvSpec: p1 must lie in [0, 1], got " + std::to_string(p1));
  }
  if (!(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("EnvSpec: p2 must lie in [0, 1], got " + std::to_string(p2));
  }
  if (horizon < 1) {
    throw std::invalid_argument("EnvSpec: horizon must be >= 1, got " + std::to_string(horizon));
  }
}

}  // namespace banditstat
