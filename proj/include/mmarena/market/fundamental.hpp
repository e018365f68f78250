#pragma once
#include <algorithm>
#include <random>
#include <stdexcept>

#include "mmarena/rng.hpp"

namespace mmarena::market {

// Mean-reverting fundamental value in ticks (discrete Ornstein-Uhlenbeck):
//   v' = v + kappa * (mean - v) + sigma * N(0,1)
// clamped at 1 tick so the value never leaves the price domain.
struct Fundamental {
  double value = 10000.0;
  double mean = 10000.0;
  double kappa = 0.05;
  double sigma = 10.0;

  void validate() const {
    if (!(value > 0.0)) throw std::invalid_argument("fundamental value must be > 0");
    if (!(kappa >= 0.0 && kappa <= 1.0))
      throw std::invalid_argument("fundamental kappa must be in [0,1]");
    if (!(sigma >= 0.0)) throw std::invalid_argument("fundamental sigma must be >= 0");
  }

  void step(Rng& rng) {
    double shock = 0.0;
    if (sigma > 0.0) {
      std::normal_distribution<double> normal(0.0, 1.0);
      shock = normal(rng);
    }
    value = value + kappa * (mean - value) + sigma * shock;
    value = std::max(value, 1.0);
  }
};

}  // namespace mmarena::market
