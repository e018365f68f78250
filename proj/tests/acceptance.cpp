// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mmarena/agent/agents.hpp"
#include "mmarena/agent/codec.hpp"
#include "mmarena/env/arena.hpp"
#include "mmarena/exp/config.hpp"
#include "mmarena/exp/dataset.hpp"
#include "mmarena/exp/runner.hpp"
#include "mmarena/market/order_book.hpp"
#include "mmarena/nn/adam.hpp"
#include "mmarena/nn/mlp.hpp"
#include "mmarena/rng.hpp"

using namespace mmarena;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("%s: %2d. %s — %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Desk-scale runs shared by the ordinal criteria (1-4).

struct SeedOutcome {
  std::uint64_t seed = 0;
  double dql_mean = 0;
  double random_mean = 0;
  double persistent_mean = 0;
  double first_quartile_mean = 0;  // learner, simulations 0..24
  double last_quartile_mean = 0;   // learner, simulations 75..99
  double best_multi_dql_mean = 0;
  bool sweep_late_beats_untrained = false;
  int sweep_size = 0;
};

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

SeedOutcome run_seed(std::uint64_t seed, const fs::path& workdir) {
  SeedOutcome out;
  out.seed = seed;

  exp::ExperimentConfig single;
  single.kind = exp::ExperimentKind::kSingle;
  single.seed = seed;
  const fs::path dir = workdir / ("single_seed" + std::to_string(seed));
  single.out_dir = dir.string();

  const exp::ResultsDataset ds = exp::run_experiment(single);
  fs::remove(dir / "actions.csv");  // bulky and not needed downstream

  std::vector<double> dql, random_v, persistent, first_q, last_q;
  for (const exp::ResultRow& r : ds.results) {
    const double v = static_cast<double>(r.total_reward);
    if (r.mm == 0) {
      dql.push_back(v);
      if (r.simulation < ds.simulations / 4) first_q.push_back(v);
      if (r.simulation >= (3 * ds.simulations) / 4) last_q.push_back(v);
    } else if (r.mm == 1) {
      random_v.push_back(v);
    } else {
      persistent.push_back(v);
    }
  }
  out.dql_mean = mean_of(dql);
  out.random_mean = mean_of(random_v);
  out.persistent_mean = mean_of(persistent);
  out.first_quartile_mean = mean_of(first_q);
  out.last_quartile_mean = mean_of(last_q);

  // Checkpoint sweep over the emitted schedule (round 0).
  exp::EvalConfig ecfg;
  ecfg.seed = seed;
  std::vector<exp::EvalEntry> entries;
  for (int k : single.checkpoint_schedule) {
    const fs::path p =
        dir / "checkpoints" / ("ckpt_round0_sim" + std::to_string(k) + ".json");
    if (fs::exists(p)) entries.push_back({k, p.string()});
  }
  const auto ranking = exp::evaluate_checkpoints(entries, ecfg);
  out.sweep_size = static_cast<int>(ranking.size());
  for (const auto& e : ranking) {
    if (e.sim_index == 0) break;             // reached untrained: no late win
    if (e.sim_index >= 50) {                 // a late checkpoint ranked above
      out.sweep_late_beats_untrained = true;
      break;
    }
  }

  exp::ExperimentConfig multi;
  multi.kind = exp::ExperimentKind::kMulti;
  multi.seed = seed;
  const exp::ResultsDataset md = exp::run_experiment(multi);
  std::vector<double> sums(3, 0.0);
  std::vector<int> counts(3, 0);
  for (const exp::ResultRow& r : md.results) {
    if (r.mm < 3) {
      sums[static_cast<std::size_t>(r.mm)] += static_cast<double>(r.total_reward);
      ++counts[static_cast<std::size_t>(r.mm)];
    }
  }
  out.best_multi_dql_mean = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    out.best_multi_dql_mean =
        std::max(out.best_multi_dql_mean,
                 sums[static_cast<std::size_t>(i)] /
                     static_cast<double>(counts[static_cast<std::size_t>(i)]));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: analytic MAE gradients vs central finite differences.

double fd_batch_loss(const nn::MLP& net, const nn::Standardizer& std_,
                     std::span<const nn::Sample> batch) {
  double loss = 0.0;
  for (const nn::Sample& s : batch) {
    const auto q = nn::forward(net, std_, s.x);
    loss += std::abs(q[static_cast<std::size_t>(s.action_index)] - s.target);
  }
  return loss / static_cast<double>(batch.size());
}

double min_kink_distance(const nn::MLP& net, const nn::Standardizer& std_,
                         std::span<const nn::Sample> batch) {
  double dist = 1e300;
  for (const nn::Sample& s : batch) {
    std::vector<double> act = std_.apply(s.x);
    for (int l = 0; l < net.layer_count(); ++l) {
      const auto in = static_cast<std::size_t>(net.sizes()[l]);
      const auto out = static_cast<std::size_t>(net.sizes()[l + 1]);
      std::vector<double> next(out);
      for (std::size_t j = 0; j < out; ++j) {
        double sum = net.biases(l)[j];
        for (std::size_t i = 0; i < in; ++i)
          sum += net.weights(l)[j * in + i] * act[i];
        next[j] = sum;
      }
      if (l + 1 < net.layer_count()) {
        for (double& v : next) {
          dist = std::min(dist, std::abs(v));
          if (v < 0.0) v = 0.0;
        }
      }
      act = std::move(next);
    }
    dist = std::min(dist, std::abs(act[static_cast<std::size_t>(s.action_index)] -
                                   s.target));
  }
  return dist;
}

bool check_gradients(std::string& detail) {
  std::mt19937_64 rng(90210);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  int done = 0;
  for (int attempt = 0; attempt < 400 && done < 20; ++attempt) {
    const std::vector<std::vector<int>> shapes = {
        {3, 4, 2}, {2, 5, 5, 3}, {4, 3, 6}, {5, 4, 4, 2}, {3, 6, 4}};
    Rng grng = make_rng(static_cast<std::uint64_t>(attempt), 3);
    nn::MLP net = nn::MLP::glorot(
        shapes[static_cast<std::size_t>(done) % shapes.size()], grng);
    for (int l = 0; l < net.layer_count(); ++l)
      for (double& b : net.biases(l)) b = 0.1 * u(rng);

    nn::Standardizer std_ =
        nn::Standardizer::identity(static_cast<std::size_t>(net.input_size()));
    for (auto& m : std_.mean) m = 0.3 * u(rng);
    for (auto& s : std_.std_dev) s = 0.7 + 0.5 * std::abs(u(rng));

    std::uniform_int_distribution<int> n_dist(1, 6);
    std::uniform_int_distribution<int> a_dist(0, net.output_size() - 1);
    std::vector<nn::Sample> batch(static_cast<std::size_t>(n_dist(rng)));
    for (nn::Sample& s : batch) {
      s.x.resize(static_cast<std::size_t>(net.input_size()));
      for (double& v : s.x) v = 2.0 * u(rng);
      s.target = 2.0 * u(rng);
      s.action_index = a_dist(rng);
    }
    if (min_kink_distance(net, std_, batch) < 1e-3) continue;

    std::vector<double> grad(net.param_count());
    nn::backward_mae(net, std_, batch, grad);
    for (std::size_t p = 0; p < net.param_count(); ++p) {
      const double saved = net.params()[p];
      net.params()[p] = saved + h;
      const double plus = fd_batch_loss(net, std_, batch);
      net.params()[p] = saved - h;
      const double minus = fd_batch_loss(net, std_, batch);
      net.params()[p] = saved;
      const double fd = (plus - minus) / (2.0 * h);
      worst = std::max(worst, std::abs(grad[p] - fd) /
                                  std::max({1.0, std::abs(grad[p]),
                                            std::abs(fd)}));
    }
    ++done;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d nets, max relative error %.2e", done,
                worst);
  detail = buf;
  return done == 20 && worst <= 1e-4;
}

// ---------------------------------------------------------------------------
// Criterion 6: Adam against a scalar transcription of the update equations.

bool check_adam(std::string& detail) {
  const nn::AdamConfig cfg;
  nn::Adam adam(4, cfg);
  std::vector<double> params = {1.0, -2.0, 0.5, 3.0};
  double m[4] = {0, 0, 0, 0}, v[4] = {0, 0, 0, 0};
  std::vector<double> ref = params;

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int t = 1; t <= 10; ++t) {
    std::vector<double> grad = {u(rng), u(rng), u(rng), u(rng)};
    adam.step(params, grad);
    for (int i = 0; i < 4; ++i) {
      const double g = grad[static_cast<std::size_t>(i)];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const double mh = m[i] / (1.0 - std::pow(cfg.beta1, t));
      const double vh = v[i] / (1.0 - std::pow(cfg.beta2, t));
      ref[static_cast<std::size_t>(i)] -=
          cfg.alpha * mh / (std::sqrt(vh) + cfg.eps);
      worst = std::max(worst, std::abs(params[static_cast<std::size_t>(i)] -
                                       ref[static_cast<std::size_t>(i)]));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "10 steps, max |delta| %.2e", worst);
  detail = buf;
  return worst <= 1e-6;
}

// ---------------------------------------------------------------------------
// Criterion 7: matching engine vs a brute-force rescanning matcher.

struct RefBook {
  struct RefOrder {
    market::OrderId id;
    market::Side side;
    market::Tick price;
    market::Qty quantity;
    std::uint64_t seq;
  };
  std::vector<RefOrder> resting;
  market::OrderId next_id = 1;
  std::uint64_t next_seq = 1;

  std::vector<market::Fill> submit(market::Side side, market::Tick price,
                                   market::Qty quantity, bool marketable) {
    RefOrder incoming{next_id++, side, price, quantity, next_seq++};
    const market::Tick limit =
        marketable ? (side == market::Side::kBuy
                          ? std::numeric_limits<market::Tick>::max()
                          : std::numeric_limits<market::Tick>::min())
                   : price;
    std::vector<market::Fill> fills;
    while (incoming.quantity > 0) {
      std::size_t best = resting.size();
      for (std::size_t i = 0; i < resting.size(); ++i) {
        const auto& r = resting[i];
        if (r.side == side) continue;
        const bool crosses = side == market::Side::kBuy ? r.price <= limit
                                                        : r.price >= limit;
        if (!crosses) continue;
        if (best == resting.size()) {
          best = i;
          continue;
        }
        const auto& b = resting[best];
        const bool better =
            side == market::Side::kBuy ? r.price < b.price : r.price > b.price;
        if (better || (r.price == b.price && r.seq < b.seq)) best = i;
      }
      if (best == resting.size()) break;
      auto& maker = resting[best];
      const market::Qty qty = std::min(incoming.quantity, maker.quantity);
      fills.push_back({maker.id, incoming.id, maker.price, qty, side});
      incoming.quantity -= qty;
      maker.quantity -= qty;
      if (maker.quantity == 0)
        resting.erase(resting.begin() + static_cast<std::ptrdiff_t>(best));
    }
    if (incoming.quantity > 0 && !marketable) resting.push_back(incoming);
    return fills;
  }

  bool cancel(market::OrderId id) {
    for (auto it = resting.begin(); it != resting.end(); ++it)
      if (it->id == id) {
        resting.erase(it);
        return true;
      }
    return false;
  }
};

bool check_matching(std::string& detail) {
  std::mt19937_64 rng(31415926);
  std::uniform_int_distribution<int> op_kind(0, 3);
  std::uniform_int_distribution<market::Tick> price_dist(90, 110);
  std::uniform_int_distribution<market::Qty> qty_dist(1, 300);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> mkt(0, 3);

  long fills_checked = 0;
  for (int s = 0; s < 10000; ++s) {
    market::OrderBook book;
    RefBook ref;
    std::vector<market::OrderId> live;
    for (int op = 0; op < 15; ++op) {
      if (op_kind(rng) == 0 && !live.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        const market::OrderId id = live[pick(rng)];
        if (book.cancel(id) != ref.cancel(id)) {
          detail = "cancel disagreement";
          return false;
        }
      } else {
        const market::Side side =
            coin(rng) == 0 ? market::Side::kBuy : market::Side::kSell;
        const bool marketable = mkt(rng) == 0;
        const market::Tick price = price_dist(rng);
        const market::Qty qty = qty_dist(rng);
        const market::OrderId id = book.next_id();
        const auto got = book.submit(side, price, qty, marketable, op);
        const auto want = ref.submit(side, price, qty, marketable);
        if (got != want) {
          detail = "fill sequence disagreement in sequence " + std::to_string(s);
          return false;
        }
        fills_checked += static_cast<long>(got.size());
        if (!marketable) live.push_back(id);
      }
    }
  }
  detail = "10000 sequences, " + std::to_string(fills_checked) +
           " fills, all identical";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: action codec bijection and the epsilon closed form.

bool check_codec(std::string& detail) {
  std::set<int> seen;
  for (int idx = 0; idx < env::kActionCount; ++idx) {
    if (agent::encode_action(agent::decode_action(idx)) != idx) {
      detail = "codec round trip broke at " + std::to_string(idx);
      return false;
    }
    seen.insert(idx);
  }
  if (seen.size() != 605) {
    detail = "codec not a bijection";
    return false;
  }

  double worst = 0.0;
  for (const std::int64_t t : {std::int64_t{0}, std::int64_t{1000},
                               std::int64_t{1000000}}) {
    agent::ExplorationState expl;
    expl.selections = t;
    double stepped = 0.99;
    for (std::int64_t i = 0; i < t; ++i) stepped *= 0.99999;
    worst = std::max(worst, std::abs(expl.epsilon() - std::max(0.01, stepped)));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "605 indices, eps deviation %.2e", worst);
  detail = buf;
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// Criterion 9: routing law on every audited order, plus tie-share uniformity.

bool check_routing(std::string& detail) {
  long violations = 0;
  long orders = 0;
  long pair_ties = 0;
  long pair_wins_first = 0;

  for (int sim = 0; sim < 10; ++sim) {
    env::ArenaConfig cfg;
    env::MMArena arena(cfg, 3, derive_seed(900, static_cast<std::uint64_t>(sim)));
    arena.set_routing_audit([&](market::Side side,
                                std::span<const env::Quote> quotes,
                                env::MmIndex winner) {
      ++orders;
      const auto rel = [side](const env::Quote& q) {
        return side == market::Side::kBuy ? q.spread_sell : q.spread_buy;
      };
      market::Tick best = std::numeric_limits<market::Tick>::max();
      for (const auto& q : quotes) best = std::min(best, rel(q));
      if (rel(quotes[winner]) != best) ++violations;
      // Twin makers 0 and 1 quote identically; when they alone share the
      // minimum, the winner must split evenly between them.
      if (rel(quotes[0]) == best && rel(quotes[1]) == best &&
          rel(quotes[2]) > best) {
        ++pair_ties;
        if (winner == 0) ++pair_wins_first;
      }
    });

    // Twins hold the reference spread; the third maker quotes at random.
    Rng rnd = make_rng(7777, static_cast<std::uint64_t>(sim));
    std::uniform_int_distribution<int> any(0, env::kActionCount - 1);
    const env::MMAction twin = env::MMAction::from_indices(5, 5, 4);
    for (int t = 0; t < 2000; ++t) {
      const env::MMAction third = agent::decode_action(any(rnd));
      arena.step(std::vector<env::MMAction>{twin, twin, third});
    }
    arena.finish();
  }

  const double p = 0.5;
  const double mu = static_cast<double>(pair_ties) * p;
  const double sigma = std::sqrt(static_cast<double>(pair_ties) * p * (1 - p));
  const double dev = std::abs(static_cast<double>(pair_wins_first) - mu);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%ld orders, %ld violations; %ld pair ties, share deviation "
                "%.1f of 3 sigma = %.1f",
                orders, violations, pair_ties, dev, 3.0 * sigma);
  detail = buf;
  return violations == 0 && orders == 10L * 2000L * 50L && pair_ties > 1000 &&
         dev <= 3.0 * sigma;
}

// ---------------------------------------------------------------------------
// Criterion 10: exact accounting identities.

bool check_accounting(std::string& detail) {
  long rows_checked = 0;
  for (int sim = 0; sim < 3; ++sim) {
    env::ArenaConfig cfg;
    env::MMArena arena(cfg, 3, derive_seed(4100, static_cast<std::uint64_t>(sim)));
    arena.enable_ledger_log();

    Rng rnd = make_rng(4200, static_cast<std::uint64_t>(sim));
    std::uniform_int_distribution<int> any(0, env::kActionCount - 1);
    const int steps = 500;
    for (int t = 0; t < steps; ++t) {
      std::vector<env::MMAction> actions;
      for (int i = 0; i < 3; ++i)
        actions.push_back(agent::decode_action(any(rnd)));
      const env::StepOutcome out = arena.step(actions);

      // Per-step investor share flow conservation, exact: every routed
      // share and order shows up in exactly one maker's counters.
      double shares = 0, ops = 0;
      for (const env::StateVector& s : out.states) {
        shares += s.shares_bought_prev + s.shares_sold_prev;
        ops += s.buy_ops_prev + s.sell_ops_prev;
      }
      if (shares != 5000.0 || ops != 50.0) {
        detail = "share flow leak at step " + std::to_string(t);
        return false;
      }
    }
    arena.finish();

    // Per-MM sum of settled step rewards equals the reported total, exact.
    std::vector<std::int64_t> sums(3, 0);
    for (const env::LedgerRow& row : arena.ledger_rows()) {
      if (row.total != row.bs + row.inv_pnl - row.hed_cost) {
        detail = "row arithmetic broke";
        return false;
      }
      sums[row.mm_id] += row.total;
      ++rows_checked;
    }
    for (env::MmIndex i = 0; i < 3; ++i)
      if (sums[i] != arena.total_reward(i)) {
        detail = "ledger total mismatch";
        return false;
      }
  }
  detail = std::to_string(rows_checked) + " ledger rows reconcile exactly";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 11: byte-identical reruns, independent of thread count.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool check_determinism(const fs::path& workdir, std::string& detail) {
  exp::ExperimentConfig cfg;
  cfg.kind = exp::ExperimentKind::kMulti;
  cfg.simulations = 20;
  cfg.rounds = 3;
  cfg.steps = 500;
  cfg.seed = 2024;
  cfg.checkpoint_schedule = {0, 10, 20};

  const fs::path d1 = workdir / "det_a";
  const fs::path d2 = workdir / "det_b";
  setenv("MM_ARENA_THREADS", "1", 1);
  exp::ExperimentConfig c1 = cfg;
  c1.out_dir = d1.string();
  exp::run_experiment(c1);
  setenv("MM_ARENA_THREADS", "4", 1);
  exp::ExperimentConfig c2 = cfg;
  c2.out_dir = d2.string();
  exp::run_experiment(c2);
  unsetenv("MM_ARENA_THREADS");

  int files = 0;
  for (const char* f : {"results.csv", "actions.csv"}) {
    if (slurp(d1 / f) != slurp(d2 / f)) {
      detail = std::string(f) + " differs";
      return false;
    }
    ++files;
  }
  for (const auto& entry : fs::recursive_directory_iterator(d1 / "checkpoints")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), d1);
    if (slurp(entry.path()) != slurp(d2 / rel)) {
      detail = rel.string() + " differs";
      return false;
    }
    ++files;
  }
  detail = std::to_string(files) + " files byte-identical across reruns";
  return files > 2;
}

// ---------------------------------------------------------------------------
// Criterion 12: retraining happens exactly at the 200-transition boundaries.

bool check_retrain_cadence(std::string& detail) {
  env::ArenaConfig arena_cfg;
  env::MMArena arena(arena_cfg, 1, 606);
  agent::DqnConfig cfg;
  agent::DqnAgent dqn(cfg, 606);

  std::vector<agent::DqnAgent::RetrainEvent> events;
  dqn.set_retrain_observer(
      [&](const agent::DqnAgent::RetrainEvent& ev) { events.push_back(ev); });

  dqn.begin_simulation();
  env::StateVector state = arena.initial_states()[0];
  std::optional<env::RewardBreakdown> reward;
  const int steps = 2000;
  for (int t = 0; t < steps; ++t) {
    const env::MMAction a = dqn.act(state, reward);
    const auto out = arena.step(std::vector<env::MMAction>{a});
    reward = out.rewards.empty()
                 ? std::nullopt
                 : std::optional<env::RewardBreakdown>(out.rewards[0]);
    state = out.states[0];
  }
  const auto last = arena.finish();
  dqn.end_simulation(state, reward,
                     last.empty() ? std::nullopt
                                  : std::optional<env::RewardBreakdown>(last[0]));

  if (dqn.transitions_stored() != steps) {
    detail = "stored " + std::to_string(dqn.transitions_stored());
    return false;
  }
  if (events.size() != 10) {
    detail = "expected 10 retrains, saw " + std::to_string(events.size());
    return false;
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.transitions_stored != static_cast<std::int64_t>(200 * (i + 1)) ||
        ev.buffer_before != 200 || ev.buffer_after != 0) {
      detail = "cadence broke at retrain " + std::to_string(i);
      return false;
    }
  }
  detail = "10 retrains at 200,400,...,2000 with the buffer emptied";
  return dqn.buffer_size() == 0;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path workdir = fs::temp_directory_path() / "mmarena_acceptance";
  fs::remove_all(workdir);
  fs::create_directories(workdir);

  // Desk-scale sessions (defaults: 100 simulations x 2000 steps x 5 rounds)
  // across three seeds, feeding criteria 1-4.
  std::vector<SeedOutcome> seeds;
  for (const std::uint64_t s : {1ULL, 2ULL, 3ULL}) {
    seeds.push_back(run_seed(s, workdir));
    std::fprintf(stderr, "[acceptance] seed %llu done (%.0fs elapsed)\n",
                 static_cast<unsigned long long>(s),
                 std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               t0)
                     .count());
  }

  {
    int ok_seeds = 0;
    std::string detail;
    for (const auto& s : seeds) {
      const bool ok = s.dql_mean > 0 && s.random_mean < 0 &&
                      s.persistent_mean < 0 && s.dql_mean > s.random_mean &&
                      s.dql_mean > s.persistent_mean;
      if (ok) ++ok_seeds;
      detail += "seed " + std::to_string(s.seed) + ": dql " + fmt(s.dql_mean) +
                ", random " + fmt(s.random_mean) + ", persistent " +
                fmt(s.persistent_mean) + (ok ? " (ok); " : " (no); ");
    }
    report(1, ok_seeds >= 2,
           "learner profitable, both baselines unprofitable (2 of 3 seeds)",
           detail);
  }

  {
    int ok_seeds = 0;
    std::string detail;
    for (const auto& s : seeds) {
      const double needed = 0.2 * std::abs(s.dql_mean - s.random_mean);
      const double gain = s.last_quartile_mean - s.first_quartile_mean;
      const bool ok = gain >= needed;
      if (ok) ++ok_seeds;
      detail += "seed " + std::to_string(s.seed) + ": gain " + fmt(gain) +
                " needed " + fmt(needed) + (ok ? " (ok); " : " (no); ");
    }
    report(2, ok_seeds >= 2,
           "last quartile of simulations beats the first (2 of 3 seeds)",
           detail);
  }

  {
    int ok_seeds = 0;
    std::string detail;
    for (const auto& s : seeds) {
      const bool ok = s.best_multi_dql_mean <= s.dql_mean;
      if (ok) ++ok_seeds;
      detail += "seed " + std::to_string(s.seed) + ": best shared-market dql " +
                fmt(s.best_multi_dql_mean) + " vs solo " + fmt(s.dql_mean) +
                (ok ? " (ok); " : " (no); ");
    }
    report(3, ok_seeds >= 2,
           "competition never helps the best learner (majority of seeds)",
           detail);
  }

  {
    int ok_seeds = 0;
    std::string detail;
    for (const auto& s : seeds) {
      if (s.sweep_late_beats_untrained) ++ok_seeds;
      detail += "seed " + std::to_string(s.seed) + ": " +
                std::to_string(s.sweep_size) + " checkpoints, late>untrained " +
                (s.sweep_late_beats_untrained ? "yes; " : "no; ");
    }
    report(4, ok_seeds >= 2,
           "checkpoint sweep ranks a late checkpoint above untrained",
           detail);
  }

  {
    std::string detail;
    const bool ok = check_gradients(detail);
    report(5, ok, "analytic gradients match central finite differences", detail);
  }
  {
    std::string detail;
    const bool ok = check_adam(detail);
    report(6, ok, "optimizer step matches the scalar update equations", detail);
  }
  {
    std::string detail;
    const bool ok = check_matching(detail);
    report(7, ok, "matching engine agrees with the brute-force matcher", detail);
  }
  {
    std::string detail;
    const bool ok = check_codec(detail);
    report(8, ok, "action codec bijection and exploration closed form", detail);
  }
  {
    std::string detail;
    const bool ok = check_routing(detail);
    report(9, ok, "routing always picks a minimal spread; ties split evenly",
           detail);
  }
  {
    std::string detail;
    const bool ok = check_accounting(detail);
    report(10, ok, "accounting identities hold exactly", detail);
  }
  {
    std::string detail;
    const bool ok = check_determinism(workdir, detail);
    report(11, ok, "identical config and seed reproduce identical bytes",
           detail);
  }
  {
    std::string detail;
    const bool ok = check_retrain_cadence(detail);
    report(12, ok, "retraining fires exactly on the cadence and clears the buffer",
           detail);
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("ACCEPTANCE: %d/12 criteria passed in %.0fs\n", 12 - g_failures,
              secs);
  return g_failures == 0 ? 0 : 1;
}
