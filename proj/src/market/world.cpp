#include "mmarena/market/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mmarena::market {

MomentumSignal momentum_signal(std::span<const Tick> history, int fast_window,
                               int slow_window) {
  const int n = static_cast<int>(history.size());
  // Both windows must exist at t and t-1.
  if (n < slow_window + 1) return MomentumSignal::kNone;

  auto window_mean = [&](int end_exclusive, int window) {
    const auto* begin = history.data() + end_exclusive - window;
    const double sum = std::accumulate(begin, begin + window, 0.0);
    return sum / window;
  };
  const double fast_now = window_mean(n, fast_window);
  const double slow_now = window_mean(n, slow_window);
  const double fast_prev = window_mean(n - 1, fast_window);
  const double slow_prev = window_mean(n - 1, slow_window);

  if (fast_prev <= slow_prev && fast_now > slow_now) return MomentumSignal::kBuy;
  if (fast_prev >= slow_prev && fast_now < slow_now) return MomentumSignal::kSell;
  return MomentumSignal::kNone;
}

void MarketConfig::validate() const {
  Fundamental f{fundamental_mean, fundamental_mean, fundamental_kappa,
                fundamental_sigma};
  f.validate();
  if (noise_agents < 0 || value_agents < 0 || momentum_agents < 0)
    throw std::invalid_argument("agent counts must be >= 0");
  if (noise_order_size < 1 || value_order_size < 1 || momentum_order_size < 1)
    throw std::invalid_argument("order sizes must be >= 1");
  if (noise_max_offset < 1)
    throw std::invalid_argument("noise_max_offset must be >= 1");
  if (value_threshold < 0)
    throw std::invalid_argument("value_threshold must be >= 0");
  if (momentum_fast < 1 || momentum_slow <= momentum_fast)
    throw std::invalid_argument("momentum windows need 1 <= fast < slow");
  if (pov_interval < 1) throw std::invalid_argument("pov_interval must be >= 1");
  if (pov_half_spread < 1)
    throw std::invalid_argument("pov_half_spread must be >= 1");
  if (pov_depth < 1) throw std::invalid_argument("pov_depth must be >= 1");
}

MarketWorld::MarketWorld(MarketConfig cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(make_rng(seed)) {
  cfg_.validate();
  fundamental_.value = cfg_.fundamental_mean;
  fundamental_.mean = cfg_.fundamental_mean;
  fundamental_.kappa = cfg_.fundamental_kappa;
  fundamental_.sigma = cfg_.fundamental_sigma;
  fundamental_.validate();

  noise_orders_.assign(static_cast<std::size_t>(cfg_.noise_agents), 0);

  // Bootstrap the book so the very first observation has a mid and a spread.
  const Tick mid0 = static_cast<Tick>(std::llround(fundamental_.value));
  pov_requote(mid0);
  snapshot_.step = 0;
  snapshot_.mid_price = mid0;
  snapshot_.spread_ref = 2 * cfg_.pov_half_spread;
  snapshot_.volume = 0;
  snapshot_.mid_price_variation = 0;
  mid_history_.push_back(mid0);
  book_.clear_trade_log();
}

void MarketWorld::submit_tracked(Side side, Tick price, Qty qty, bool marketable,
                                 OrderId* tracked) {
  if (tracked != nullptr) *tracked = book_.next_id();
  auto fills = book_.submit(side, price, qty, marketable, step_index_);
  for (const auto& f : fills) step_volume_ += f.quantity;
  backstop_if_empty(snapshot_.mid_price);
}

void MarketWorld::pov_requote(Tick around_mid) {
  if (pov_bid_ != 0) book_.cancel(pov_bid_);
  if (pov_ask_ != 0) book_.cancel(pov_ask_);
  const Tick bid = std::max<Tick>(1, around_mid - cfg_.pov_half_spread);
  const Tick ask = around_mid + cfg_.pov_half_spread;
  pov_bid_ = book_.next_id();
  auto bid_fills = book_.submit(Side::kBuy, bid, cfg_.pov_depth, false, step_index_);
  pov_ask_ = book_.next_id();
  auto ask_fills = book_.submit(Side::kSell, ask, cfg_.pov_depth, false, step_index_);
  for (const auto& f : bid_fills) step_volume_ += f.quantity;
  for (const auto& f : ask_fills) step_volume_ += f.quantity;
}

// Liquidity backstop: if any side has emptied, the POV maker requotes that
// side immediately at the last mid, clamped so it never crosses the book.
void MarketWorld::backstop_if_empty(Tick around_mid) {
  if (book_.side_empty(Side::kBuy)) {
    Tick bid = around_mid - cfg_.pov_half_spread;
    if (auto ask = book_.best_ask()) bid = std::min(bid, *ask - 1);
    if (bid >= 1) {
      pov_bid_ = book_.next_id();
      book_.submit(Side::kBuy, bid, cfg_.pov_depth, false, step_index_);
    }
  }
  if (book_.side_empty(Side::kSell)) {
    Tick ask = around_mid + cfg_.pov_half_spread;
    if (auto bid = book_.best_bid()) ask = std::max(ask, *bid + 1);
    pov_ask_ = book_.next_id();
    book_.submit(Side::kSell, ask, cfg_.pov_depth, false, step_index_);
  }
}

const MarketSnapshot& MarketWorld::step() {
  const Tick prev_mid = snapshot_.mid_price;
  const Tick prev_spread = snapshot_.spread_ref;
  ++step_index_;
  step_volume_ = 0;
  book_.clear_trade_log();

  fundamental_.step(rng_);

  if (cfg_.pov_interval > 0 && step_index_ % cfg_.pov_interval == 0) {
    pov_requote(prev_mid);
    backstop_if_empty(prev_mid);
  }

  // Noise agents: replace the previous working order with a fresh passive
  // limit order, buys below the mid and sells above it.
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> offset(1, cfg_.noise_max_offset);
  for (int i = 0; i < cfg_.noise_agents; ++i) {
    auto& working = noise_orders_[static_cast<std::size_t>(i)];
    if (working != 0) book_.cancel(working);
    const Side side = coin(rng_) == 0 ? Side::kBuy : Side::kSell;
    const int off = offset(rng_);
    const Tick price = side == Side::kBuy ? std::max<Tick>(1, prev_mid - off)
                                          : prev_mid + off;
    submit_tracked(side, price, cfg_.noise_order_size, false, &working);
  }

  // Value agents trade toward the fundamental when the gap is wide enough.
  const double gap = fundamental_.value - static_cast<double>(prev_mid);
  if (std::abs(gap) > static_cast<double>(cfg_.value_threshold)) {
    const Side side = gap > 0 ? Side::kBuy : Side::kSell;
    for (int i = 0; i < cfg_.value_agents; ++i) {
      submit_tracked(side, 0, cfg_.value_order_size, true);
    }
  }

  // Momentum agents act on the shared moving-average cross signal.
  if (cfg_.momentum_agents > 0) {
    const MomentumSignal sig =
        momentum_signal(mid_history_, cfg_.momentum_fast, cfg_.momentum_slow);
    if (sig != MomentumSignal::kNone) {
      const Side side = sig == MomentumSignal::kBuy ? Side::kBuy : Side::kSell;
      for (int i = 0; i < cfg_.momentum_agents; ++i) {
        submit_tracked(side, 0, cfg_.momentum_order_size, true);
      }
    }
  }

  snapshot_ = close_step(prev_mid, prev_spread);
  mid_history_.push_back(snapshot_.mid_price);
  return snapshot_;
}

MarketSnapshot MarketWorld::close_step(Tick prev_mid, Tick prev_spread) {
  MarketSnapshot snap;
  snap.step = step_index_;
  const auto bid = book_.best_bid();
  const auto ask = book_.best_ask();
  if (bid && ask) {
    snap.mid_price = (*bid + *ask) / 2;  // odd spread rounds half-down
    snap.spread_ref = std::max<Tick>(1, *ask - *bid);
  } else {
    // Unreachable with the backstop in place; carry the previous values.
    snap.mid_price = prev_mid;
    snap.spread_ref = prev_spread;
  }
  snap.volume = step_volume_;
  snap.mid_price_variation = snap.mid_price - prev_mid;
  return snap;
}

}  // namespace mmarena::market
