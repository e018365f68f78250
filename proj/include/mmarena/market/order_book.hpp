#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace mmarena::market {

using Tick = std::int64_t;
using Qty = std::int64_t;
using OrderId = std::uint64_t;

enum class Side { kBuy, kSell };

inline Side opposite(Side s) { return s == Side::kBuy ? Side::kSell : Side::kBuy; }

struct Order {
  OrderId id = 0;
  Side side = Side::kBuy;
  Tick price = 0;      // limit price; ignored for marketable orders
  Qty quantity = 0;
  bool marketable = false;
  std::int64_t step = 0;   // step index at submission
  std::uint64_t seq = 0;   // global arrival sequence, FIFO within a level
};

struct Fill {
  OrderId resting_id = 0;
  OrderId incoming_id = 0;
  Tick price = 0;          // resting order's price
  Qty quantity = 0;
  Side incoming_side = Side::kBuy;

  friend bool operator==(const Fill&, const Fill&) = default;
};

// Price-time priority book over integral ticks. Crossing quantity matches at
// the resting order's price; the residual of a limit order rests, the
// residual of a marketable order is discarded.
class OrderBook {
 public:
  // Submits an order and returns the fills it produced, in match order.
  // Rejects quantity <= 0 and non-positive limit prices.
  std::vector<Fill> submit(Side side, Tick price, Qty quantity, bool marketable,
                           std::int64_t step);

  // Removes a resting order; returns false if it is not in the book.
  bool cancel(OrderId id);

  std::optional<Tick> best_bid() const;
  std::optional<Tick> best_ask() const;

  bool side_empty(Side s) const {
    return s == Side::kBuy ? bids_.empty() : asks_.empty();
  }

  // Fills produced since the last clear_trade_log().
  const std::vector<Fill>& trade_log() const { return trade_log_; }
  void clear_trade_log() { trade_log_.clear(); }

  OrderId next_id() const { return next_id_; }
  std::size_t resting_order_count() const { return resting_count_; }

 private:
  std::map<Tick, std::deque<Order>, std::greater<Tick>> bids_;
  std::map<Tick, std::deque<Order>> asks_;
  std::vector<Fill> trade_log_;
  OrderId next_id_ = 1;
  std::uint64_t next_seq_ = 1;
  std::size_t resting_count_ = 0;

  template <typename Levels>
  Qty match_against(Levels& levels, Order& incoming, Tick limit,
                    std::vector<Fill>& fills);
};

}  // namespace mmarena::market
