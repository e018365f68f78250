#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmarena/market/fundamental.hpp"
#include "mmarena/market/order_book.hpp"
#include "mmarena/rng.hpp"

namespace mmarena::market {

enum class MomentumSignal { kNone, kBuy, kSell };

// Moving-average cross detector over a closing-mid history. A buy fires on
// the step where the fast average crosses above the slow one, a sell on the
// symmetric downward cross. Needs one step of history beyond the slow window
// to see both sides of the cross; shorter histories yield kNone.
MomentumSignal momentum_signal(std::span<const Tick> price_history,
                               int fast_window = 20, int slow_window = 50);

struct MarketSnapshot {
  std::int64_t step = 0;
  Tick mid_price = 0;
  Tick spread_ref = 1;
  Qty volume = 0;
  Tick mid_price_variation = 0;

  friend bool operator==(const MarketSnapshot&, const MarketSnapshot&) = default;
};

struct MarketConfig {
  double fundamental_mean = 10000.0;
  double fundamental_kappa = 0.05;
  double fundamental_sigma = 10.0;
  int noise_agents = 100;
  Qty noise_order_size = 100;
  int noise_max_offset = 5;          // limit orders at mid -/+ U{1..offset}
  int value_agents = 10;
  Qty value_order_size = 100;
  Tick value_threshold = 2;          // trade when |mid - fundamental| > threshold
  int momentum_agents = 10;
  Qty momentum_order_size = 100;
  int momentum_fast = 20;
  int momentum_slow = 50;
  int pov_interval = 10;             // requote cadence in steps
  Tick pov_half_spread = 5;
  Qty pov_depth = 1000;

  void validate() const;
};

// Background market: an OU fundamental plus noise/value/momentum agents and a
// POV liquidity provider trading on one shared limit order book. The POV
// maker bootstraps the book at construction and backstops any side that
// empties mid-step, so every snapshot has a two-sided book.
class MarketWorld {
 public:
  MarketWorld(MarketConfig cfg, std::uint64_t seed);

  // Advances one step: fundamental shock, background agent orders, snapshot.
  const MarketSnapshot& step();

  const MarketSnapshot& snapshot() const { return snapshot_; }
  const std::vector<Tick>& mid_history() const { return mid_history_; }
  const Fundamental& fundamental() const { return fundamental_; }
  const MarketConfig& config() const { return cfg_; }
  OrderBook& book() { return book_; }

 private:
  MarketConfig cfg_;
  Rng rng_;
  Fundamental fundamental_;
  OrderBook book_;
  MarketSnapshot snapshot_;
  std::vector<Tick> mid_history_;
  std::vector<OrderId> noise_orders_;   // one working order per noise agent
  OrderId pov_bid_ = 0;
  OrderId pov_ask_ = 0;
  std::int64_t step_index_ = 0;
  Qty step_volume_ = 0;

  void submit_tracked(Side side, Tick price, Qty qty, bool marketable,
                      OrderId* tracked = nullptr);
  void pov_requote(Tick around_mid);
  void backstop_if_empty(Tick around_mid);
  MarketSnapshot close_step(Tick prev_mid, Tick prev_spread);
};

}  // namespace mmarena::market
