#include "mmarena/env/arena.hpp"

#include <limits>
#include <stdexcept>

namespace mmarena::env {

void ArenaConfig::validate() const {
  market.validate();
  if (investors < 1) throw std::invalid_argument("investors must be >= 1");
  if (investor_order_size < 1)
    throw std::invalid_argument("investor_order_size must be >= 1");
}

MmIndex route_investor_order(Side investor_side, std::span<const Quote> quotes,
                             Rng& rng) {
  if (quotes.empty()) throw std::invalid_argument("no quotes to route to");
  const auto relevant = [investor_side](const Quote& q) {
    return investor_side == Side::kBuy ? q.spread_sell : q.spread_buy;
  };
  Tick best = std::numeric_limits<Tick>::max();
  for (const Quote& q : quotes) best = std::min(best, relevant(q));
  std::vector<MmIndex> tied;
  for (const Quote& q : quotes)
    if (relevant(q) == best) tied.push_back(q.owner);
  if (tied.size() == 1) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

StateVector build_state(const market::MarketSnapshot& prev,
                        const market::MarketSnapshot& now,
                        const MMLedger& ledger) {
  StateVector s;
  s.buy_ops_prev = static_cast<double>(ledger.buy_ops);
  s.shares_bought_prev = static_cast<double>(ledger.buy_shares);
  s.sell_ops_prev = static_cast<double>(ledger.sell_ops);
  s.shares_sold_prev = static_cast<double>(ledger.sell_shares);
  s.inventory_prev = static_cast<double>(ledger.last_inventory);
  s.inventory_now = static_cast<double>(ledger.inventory);
  s.mid_price_variation = static_cast<double>(now.mid_price_variation);
  s.spread_ref_now = static_cast<double>(now.spread_ref);
  s.spread_ref_prev = static_cast<double>(prev.spread_ref);
  s.volume_prev = static_cast<double>(now.volume);
  return s;
}

MMArena::MMArena(const ArenaConfig& config, int mm_count, std::uint64_t seed)
    : config_(config),
      mm_count_(mm_count),
      world_(config.market, derive_seed(seed, stream::kMarket)),
      sides_rng_(make_rng(seed, stream::kInvestorSides)),
      tie_rng_(make_rng(seed, stream::kTieBreak)) {
  config_.validate();
  if (mm_count_ < 1) throw std::invalid_argument("mm_count must be >= 1");
  ledgers_.resize(static_cast<std::size_t>(mm_count_));
  totals_.assign(static_cast<std::size_t>(mm_count_), 0);
  pending_.resize(static_cast<std::size_t>(mm_count_));
  snapshot_ = world_.snapshot();
  prev_snapshot_ = market::MarketSnapshot{};  // cold start: zeroed pre-history
  prev_snapshot_.spread_ref = 0;
  initial_states_.reserve(static_cast<std::size_t>(mm_count_));
  for (const MMLedger& ledger : ledgers_)
    initial_states_.push_back(build_state(prev_snapshot_, snapshot_, ledger));
}

std::vector<RewardBreakdown> MMArena::finalize_pending(
    Tick mid_price_variation) {
  std::vector<RewardBreakdown> rewards;
  if (!has_pending_) return rewards;
  rewards.reserve(pending_.size());
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const PendingReward& p = pending_[i];
    const RewardBreakdown r = finalize_reward(p.bs, p.inventory_after_fills,
                                              mid_price_variation, p.hed_cost);
    totals_[i] += r.total;
    ledgers_[i].cash_proxy += r.total;
    if (log_ledger_)
      ledger_rows_.push_back({p.step, i, ledgers_[i].inventory, r.bs,
                              r.inv_pnl, r.hed_cost, r.total});
    rewards.push_back(r);
  }
  has_pending_ = false;
  return rewards;
}

StepOutcome MMArena::step(std::span<const MMAction> actions) {
  if (finished_) throw std::logic_error("step() after finish()");
  if (static_cast<int>(actions.size()) != mm_count_)
    throw std::invalid_argument("one action per registered MM required");

  prev_snapshot_ = snapshot_;
  snapshot_ = world_.step();
  StepOutcome out;
  out.rewards = finalize_pending(snapshot_.mid_price_variation);

  std::vector<Quote> quotes;
  quotes.reserve(static_cast<std::size_t>(mm_count_));
  for (int i = 0; i < mm_count_; ++i) {
    ledgers_[static_cast<std::size_t>(i)].begin_step();
    quotes.push_back(quote_from_action(snapshot_.spread_ref,
                                       actions[static_cast<std::size_t>(i)],
                                       static_cast<MmIndex>(i)));
  }

  // Sides come off their own stream before any routing, so the investor flow
  // is identical for every roster under the same seed.
  std::vector<Side> sides;
  sides.reserve(static_cast<std::size_t>(config_.investors));
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < config_.investors; ++i)
    sides.push_back(coin(sides_rng_) ? Side::kBuy : Side::kSell);

  for (Side side : sides) {
    const MmIndex winner = route_investor_order(side, quotes, tie_rng_);
    if (audit_) audit_(side, quotes, winner);
    const Quote& q = quotes[winner];
    const Tick spread_mm =
        side == Side::kBuy ? q.spread_sell : q.spread_buy;
    ledgers_[winner].apply_fill(side, config_.investor_order_size, spread_mm);
  }

  for (int i = 0; i < mm_count_; ++i) {
    MMLedger& ledger = ledgers_[static_cast<std::size_t>(i)];
    ledger.apply_hedge(actions[static_cast<std::size_t>(i)].hedge_index(),
                       snapshot_.spread_ref);
    pending_[static_cast<std::size_t>(i)] =
        PendingReward{ledger.step_bs, ledger.inventory_after_fills,
                      ledger.step_hed_cost, steps_taken_};
  }
  has_pending_ = true;

  out.states.reserve(static_cast<std::size_t>(mm_count_));
  for (const MMLedger& ledger : ledgers_)
    out.states.push_back(build_state(prev_snapshot_, snapshot_, ledger));
  out.snapshot = snapshot_;
  ++steps_taken_;
  return out;
}

std::vector<RewardBreakdown> MMArena::finish() {
  if (finished_) throw std::logic_error("finish() called twice");
  finished_ = true;
  if (!has_pending_) return {};
  prev_snapshot_ = snapshot_;
  snapshot_ = world_.step();
  return finalize_pending(snapshot_.mid_price_variation);
}

}  // namespace mmarena::env
