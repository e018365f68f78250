#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mmarena::agent {

// eps_t = max(eps_min, eps_start * decay^t), t = action selections so far.
// The closed form replaces repeated multiplication so a reloaded counter
// resumes the schedule exactly.
struct ExplorationState {
  double eps_start = 0.99;
  double decay = 0.99999;
  double eps_min = 0.01;
  std::int64_t selections = 0;

  double epsilon() const {
    return std::max(eps_min,
                    eps_start * std::pow(decay,
                                         static_cast<double>(selections)));
  }
  void advance() { ++selections; }
};

}  // namespace mmarena::agent
