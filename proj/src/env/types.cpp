#include "mmarena/env/types.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mmarena::env {

Tick quoted_spread(Tick spread_ref, int spread_grid_index) {
  if (spread_ref < 1) throw std::invalid_argument("spread_ref must be >= 1");
  if (spread_grid_index < 0 || spread_grid_index >= kSpreadGridSize)
    throw std::invalid_argument("spread grid index out of range");
  // round(spread_ref * k / 5), half-up; the remainder is never exactly .5.
  const std::int64_t numer = 2 * spread_ref * spread_grid_index + 5;
  return numer / 10;
}

Quote quote_from_action(Tick spread_ref, const MMAction& action, MmIndex owner) {
  Quote q;
  q.spread_buy = quoted_spread(spread_ref, action.buy_index());
  q.spread_sell = quoted_spread(spread_ref, action.sell_index());
  q.owner = owner;
  return q;
}

void MMLedger::apply_fill(Side investor_side, Qty qty, Tick spread_mm) {
  if (qty <= 0) throw std::invalid_argument("fill quantity must be > 0");
  if (investor_side == Side::kBuy) {
    inventory -= qty;  // the maker sold
    ++buy_ops;
    buy_shares += qty;
  } else {
    inventory += qty;
    ++sell_ops;
    sell_shares += qty;
  }
  step_bs += qty * spread_mm;
  inventory_after_fills = inventory;
}

Qty hedged_quantity(Qty inventory, int hedge_grid_index) {
  if (hedge_grid_index < 0 || hedge_grid_index >= kHedgeGridSize)
    throw std::invalid_argument("hedge grid index out of range");
  const Qty magnitude = std::abs(inventory);
  // round(|inv| * h / 4), half-up over quarters.
  return (2 * magnitude * hedge_grid_index + 4) / 8;
}

std::int64_t MMLedger::apply_hedge(int hedge_grid_index, Tick spread_ref) {
  const Qty hedged = hedged_quantity(inventory, hedge_grid_index);
  if (inventory > 0) {
    inventory -= hedged;
  } else {
    inventory += hedged;
  }
  const std::int64_t cost = hedged * spread_ref;
  step_hed_cost += cost;
  return cost;
}

RewardBreakdown finalize_reward(std::int64_t bs, Qty inventory_after_fills,
                                Tick mid_price_variation, std::int64_t hed_cost) {
  RewardBreakdown r;
  r.bs = bs;
  r.inv_pnl = inventory_after_fills * mid_price_variation;
  r.hed_cost = hed_cost;
  r.total = r.bs + r.inv_pnl - r.hed_cost;
  return r;
}

const std::array<std::string, StateVector::kFeatures>& StateVector::feature_names() {
  static const std::array<std::string, kFeatures> names = {
      "buy_ops_prev",  "shares_bought_prev", "sell_ops_prev",
      "shares_sold_prev", "inventory_prev",  "inventory_now",
      "mid_price_variation", "spread_ref_now", "spread_ref_prev",
      "volume_prev"};
  return names;
}

}  // namespace mmarena::env
