#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mmarena::env {

// Per-side spread multipliers in [-1,1] (11 evenly spaced values) and a hedge
// fraction in [0,1] (5 values). Actions are stored as grid indices so every
// instance is on-grid by construction.
inline constexpr int kSpreadGridSize = 11;
inline constexpr int kHedgeGridSize = 5;
inline constexpr int kActionCount = kSpreadGridSize * kSpreadGridSize * kHedgeGridSize;

inline constexpr std::array<double, kSpreadGridSize> kSpreadGrid = {
    -1.0, -0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
inline constexpr std::array<double, kHedgeGridSize> kHedgeGrid = {0.0, 0.25, 0.5,
                                                                  0.75, 1.0};

class MMAction {
 public:
  MMAction() = default;

  static MMAction from_indices(int buy, int sell, int hedge) {
    if (buy < 0 || buy >= kSpreadGridSize || sell < 0 || sell >= kSpreadGridSize ||
        hedge < 0 || hedge >= kHedgeGridSize) {
      throw std::invalid_argument("action grid index out of range");
    }
    MMAction a;
    a.buy_ = buy;
    a.sell_ = sell;
    a.hedge_ = hedge;
    return a;
  }

  // Builds an action from raw epsilon values, rejecting anything off-grid.
  static MMAction from_eps(double eps_buy, double eps_sell, double eps_hedge) {
    return from_indices(spread_index(eps_buy), spread_index(eps_sell),
                        hedge_index(eps_hedge));
  }

  int buy_index() const { return buy_; }
  int sell_index() const { return sell_; }
  int hedge_index() const { return hedge_; }

  double eps_buy() const { return kSpreadGrid[static_cast<std::size_t>(buy_)]; }
  double eps_sell() const { return kSpreadGrid[static_cast<std::size_t>(sell_)]; }
  double eps_hedge() const { return kHedgeGrid[static_cast<std::size_t>(hedge_)]; }

  friend bool operator==(const MMAction&, const MMAction&) = default;

 private:
  static int spread_index(double eps) {
    for (int i = 0; i < kSpreadGridSize; ++i) {
      if (std::abs(kSpreadGrid[static_cast<std::size_t>(i)] - eps) < 1e-9) return i;
    }
    throw std::invalid_argument("epsilon not on the spread grid");
  }
  static int hedge_index(double eps) {
    for (int i = 0; i < kHedgeGridSize; ++i) {
      if (std::abs(kHedgeGrid[static_cast<std::size_t>(i)] - eps) < 1e-9) return i;
    }
    throw std::invalid_argument("epsilon not on the hedge grid");
  }

  int buy_ = 0;
  int sell_ = 0;
  int hedge_ = 0;
};

}  // namespace mmarena::env
