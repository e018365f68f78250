#pragma once
#include <array>
#include <cstdint>
#include <string>

#include "mmarena/env/action.hpp"
#include "mmarena/market/order_book.hpp"

namespace mmarena::env {

using market::Qty;
using market::Side;
using market::Tick;

using MmIndex = std::size_t;  // registration slot of a market maker

// Per-side quoted spreads, derived from the reference spread:
//   spread = round(spread_ref * (1 + eps)), floored at 0.
struct Quote {
  Tick spread_buy = 0;
  Tick spread_sell = 0;
  MmIndex owner = 0;
};

// Exact integer arithmetic: spread_ref * (1 + eps) with eps = (k - 5) / 5
// becomes spread_ref * k / 5, rounded to the nearest tick. On-grid epsilons
// never produce an exact .5 remainder, so half-up equals round-to-nearest.
Tick quoted_spread(Tick spread_ref, int spread_grid_index);
Quote quote_from_action(Tick spread_ref, const MMAction& action, MmIndex owner);

// Reward decomposition for one step, all in tick*shares:
//   total = bs + inv_pnl - hed_cost, exact in integers.
struct RewardBreakdown {
  std::int64_t bs = 0;
  std::int64_t inv_pnl = 0;
  std::int64_t hed_cost = 0;
  std::int64_t total = 0;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

// Running position and per-step trading counters for one market maker.
// Counters are investor-side: buy_ops counts investor buys (the maker sold).
struct MMLedger {
  Qty inventory = 0;
  Qty last_inventory = 0;        // inventory at the start of the current step
  std::int64_t cash_proxy = 0;   // cumulative finalized reward
  std::int64_t buy_ops = 0;
  Qty buy_shares = 0;
  std::int64_t sell_ops = 0;
  Qty sell_shares = 0;
  std::int64_t step_bs = 0;
  std::int64_t step_hed_cost = 0;
  Qty inventory_after_fills = 0;

  void begin_step() {
    last_inventory = inventory;
    buy_ops = 0;
    buy_shares = 0;
    sell_ops = 0;
    sell_shares = 0;
    step_bs = 0;
    step_hed_cost = 0;
    inventory_after_fills = inventory;
  }

  // Applies an investor fill. An investor buy reduces maker inventory; the
  // bs reward accrues quantity * quoted spread on the matched side.
  void apply_fill(Side investor_side, Qty qty, Tick spread_mm);

  // Moves round(|inventory| * eps_hedge) shares toward zero and returns the
  // hedging cost, hedged * spread_ref.
  std::int64_t apply_hedge(int hedge_grid_index, Tick spread_ref);
};

// Hedged quantity for the grid fraction h/4: round(|inventory| * h / 4) with
// exact integer half-up rounding.
Qty hedged_quantity(Qty inventory, int hedge_grid_index);

// Completes a step's reward once the following mid-price move is known.
// inv_pnl charges the post-fill, pre-hedge position with the variation.
RewardBreakdown finalize_reward(std::int64_t bs, Qty inventory_after_fills,
                                Tick mid_price_variation, std::int64_t hed_cost);

// The 10-feature observation, in this fixed order when flattened:
//   [buy_ops_prev, shares_bought_prev, sell_ops_prev, shares_sold_prev,
//    inventory_prev, inventory_now, mid_price_variation, spread_ref_now,
//    spread_ref_prev, volume_prev]
// "prev" activity fields describe the most recently completed step; the
// cold-start state before any trading zeroes everything except the current
// inventory and reference spread.
struct StateVector {
  double buy_ops_prev = 0;
  double shares_bought_prev = 0;
  double sell_ops_prev = 0;
  double shares_sold_prev = 0;
  double inventory_prev = 0;
  double inventory_now = 0;
  double mid_price_variation = 0;
  double spread_ref_now = 0;
  double spread_ref_prev = 0;
  double volume_prev = 0;

  static constexpr std::size_t kFeatures = 10;
  static const std::array<std::string, kFeatures>& feature_names();

  std::array<double, kFeatures> to_array() const {
    return {buy_ops_prev,  shares_bought_prev, sell_ops_prev, shares_sold_prev,
            inventory_prev, inventory_now,     mid_price_variation,
            spread_ref_now, spread_ref_prev,   volume_prev};
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

}  // namespace mmarena::env
