#include "mmarena/market/order_book.hpp"

#include <limits>
#include <stdexcept>

namespace mmarena::market {

template <typename Levels>
Qty OrderBook::match_against(Levels& levels, Order& incoming, Tick limit,
                             std::vector<Fill>& fills) {
  Qty matched = 0;
  while (incoming.quantity > 0 && !levels.empty()) {
    auto level = levels.begin();  // best price for this side's comparator
    const Tick level_price = level->first;
    const bool crosses = incoming.side == Side::kBuy ? level_price <= limit
                                                     : level_price >= limit;
    if (!crosses) break;
    auto& queue = level->second;
    Order& resting = queue.front();
    const Qty qty = std::min(incoming.quantity, resting.quantity);
    fills.push_back(Fill{resting.id, incoming.id, level_price, qty, incoming.side});
    incoming.quantity -= qty;
    resting.quantity -= qty;
    matched += qty;
    if (resting.quantity == 0) {
      queue.pop_front();
      --resting_count_;
      if (queue.empty()) levels.erase(level);
    }
  }
  return matched;
}

std::vector<Fill> OrderBook::submit(Side side, Tick price, Qty quantity,
                                    bool marketable, std::int64_t step) {
  if (quantity <= 0) throw std::invalid_argument("order quantity must be > 0");
  if (!marketable && price <= 0)
    throw std::invalid_argument("limit price must be > 0");

  Order incoming;
  incoming.id = next_id_++;
  incoming.side = side;
  incoming.price = price;
  incoming.quantity = quantity;
  incoming.marketable = marketable;
  incoming.step = step;
  incoming.seq = next_seq_++;

  const Tick limit = marketable ? (side == Side::kBuy
                                       ? std::numeric_limits<Tick>::max()
                                       : std::numeric_limits<Tick>::min())
                                : price;

  std::vector<Fill> fills;
  if (side == Side::kBuy) {
    match_against(asks_, incoming, limit, fills);
  } else {
    match_against(bids_, incoming, limit, fills);
  }

  if (incoming.quantity > 0 && !marketable) {
    if (side == Side::kBuy) {
      bids_[incoming.price].push_back(incoming);
    } else {
      asks_[incoming.price].push_back(incoming);
    }
    ++resting_count_;
  }
  trade_log_.insert(trade_log_.end(), fills.begin(), fills.end());
  return fills;
}

bool OrderBook::cancel(OrderId id) {
  auto erase_from = [&](auto& levels) {
    for (auto it = levels.begin(); it != levels.end(); ++it) {
      auto& queue = it->second;
      for (auto q = queue.begin(); q != queue.end(); ++q) {
        if (q->id == id) {
          queue.erase(q);
          --resting_count_;
          if (queue.empty()) levels.erase(it);
          return true;
        }
      }
    }
    return false;
  };
  return erase_from(bids_) || erase_from(asks_);
}

std::optional<Tick> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Tick> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

}  // namespace mmarena::market
