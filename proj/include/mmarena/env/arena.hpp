#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmarena/env/action.hpp"
#include "mmarena/env/types.hpp"
#include "mmarena/market/world.hpp"
#include "mmarena/rng.hpp"

namespace mmarena::env {

// Investor buys route to the minimal spread_sell, sells to the minimal
// spread_buy. Exact ties are resolved uniformly; rng is consumed only then.
MmIndex route_investor_order(Side investor_side, std::span<const Quote> quotes,
                             Rng& rng);

// Observation assembled after a step's fills and hedge. "prev" fields refer
// to the last completed step; at step 0 `prev` is a zeroed snapshot.
StateVector build_state(const market::MarketSnapshot& prev,
                        const market::MarketSnapshot& now,
                        const MMLedger& ledger);

struct ArenaConfig {
  market::MarketConfig market;
  int investors = 50;
  Qty investor_order_size = 100;

  void validate() const;
};

// Per-step accounting row, recorded when a step's reward is finalized.
struct LedgerRow {
  int step = 0;  // action step, 0-based
  MmIndex mm_id = 0;
  Qty inventory = 0;  // end-of-step position (post-hedge)
  std::int64_t bs = 0;
  std::int64_t inv_pnl = 0;
  std::int64_t hed_cost = 0;
  std::int64_t total = 0;
};

struct StepOutcome {
  std::vector<StateVector> states;       // next state per MM
  std::vector<RewardBreakdown> rewards;  // previous action's finalized
                                         // rewards; empty on the first call
  market::MarketSnapshot snapshot;
};

// The competitive environment: a background market plus a set of quoting
// market makers fed by a constant stream of investor orders. A step's
// inventory P&L depends on the *next* market transition, so the reward for
// the action supplied to step() is returned by the following step() call
// (or by finish(), which advances the market once more to settle the last
// action). Within one step the sequence is: market step, quotes from
// actions at the fresh reference spread, investor routing and fills,
// hedging, then states out.
class MMArena {
 public:
  MMArena(const ArenaConfig& config, int mm_count, std::uint64_t seed);

  int mm_count() const { return mm_count_; }
  const ArenaConfig& config() const { return config_; }
  const std::vector<StateVector>& initial_states() const {
    return initial_states_;
  }

  // Advances one step. `actions` must supply one action per registered MM.
  StepOutcome step(std::span<const MMAction> actions);

  // Settles the last pending reward with one extra market step. Returns the
  // finalized rewards (empty if step() was never called). The arena is
  // unusable afterwards.
  std::vector<RewardBreakdown> finish();

  bool finished() const { return finished_; }
  int steps_taken() const { return steps_taken_; }

  const MMLedger& ledger(MmIndex mm) const { return ledgers_.at(mm); }
  std::int64_t total_reward(MmIndex mm) const { return totals_.at(mm); }
  const std::vector<std::int64_t>& totals() const { return totals_; }

  const market::MarketWorld& world() const { return world_; }

  using RoutingAudit =
      std::function<void(Side, std::span<const Quote>, MmIndex)>;
  void set_routing_audit(RoutingAudit audit) { audit_ = std::move(audit); }

  void enable_ledger_log() { log_ledger_ = true; }
  const std::vector<LedgerRow>& ledger_rows() const { return ledger_rows_; }

 private:
  struct PendingReward {
    std::int64_t bs = 0;
    Qty inventory_after_fills = 0;
    std::int64_t hed_cost = 0;
    int step = 0;
  };

  std::vector<RewardBreakdown> finalize_pending(Tick mid_price_variation);

  ArenaConfig config_;
  int mm_count_;
  market::MarketWorld world_;
  Rng sides_rng_;
  Rng tie_rng_;
  std::vector<MMLedger> ledgers_;
  std::vector<std::int64_t> totals_;
  std::vector<PendingReward> pending_;
  bool has_pending_ = false;
  market::MarketSnapshot prev_snapshot_{};
  market::MarketSnapshot snapshot_{};
  std::vector<StateVector> initial_states_;
  int steps_taken_ = 0;
  bool finished_ = false;
  RoutingAudit audit_;
  bool log_ledger_ = false;
  std::vector<LedgerRow> ledger_rows_;
};

}  // namespace mmarena::env
