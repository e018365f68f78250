#include "mmarena/exp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mmarena/io/csv.hpp"

namespace mmarena::exp {
namespace fs = std::filesystem;

namespace {

std::optional<env::RewardBreakdown> reward_at(
    const std::vector<env::RewardBreakdown>& rewards, std::size_t i) {
  if (rewards.empty()) return std::nullopt;
  return rewards.at(i);
}

struct RoundOutput {
  std::vector<std::vector<std::int64_t>> totals;  // [simulation][mm]
  std::vector<ActionRec> actions;
};

// Path for a learning agent's checkpoint: flat when the roster has a single
// learning DQL, otherwise one subdirectory per agent.
std::string ckpt_path(const std::string& out_dir, const std::string& name,
                      bool single_learner, int round, int sim) {
  const std::string file =
      "ckpt_round" + std::to_string(round) + "_sim" + std::to_string(sim) +
      ".json";
  if (single_learner) return out_dir + "/checkpoints/" + file;
  return out_dir + "/checkpoints/" + name + "/" + file;
}

void write_ledger_csv(const std::string& path,
                      const std::vector<env::LedgerRow>& rows,
                      const std::vector<RosterSlot>& roster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,mm_id,inv,bs,inv_pnl,hed_cost,reward_total\n";
  for (const env::LedgerRow& r : rows)
    out << r.step << ',' << roster.at(r.mm_id).name << ',' << r.inventory
        << ',' << r.bs << ',' << r.inv_pnl << ',' << r.hed_cost << ','
        << r.total << '\n';
}

RoundOutput run_round(const ExperimentConfig& cfg, int round,
                      const std::vector<nn::Checkpoint>& frozen,
                      bool record_actions) {
  const std::uint64_t round_seed =
      derive_seed(cfg.seed, stream::kRound, static_cast<std::uint64_t>(round));
  const auto roster = cfg.roster();
  const int learners = static_cast<int>(
      std::count_if(roster.begin(), roster.end(), [](const RosterSlot& s) {
        return s.role == AgentRole::kDql;
      }));
  const bool single_learner = learners == 1;

  std::vector<std::unique_ptr<agent::MMAgentBase>> agents;
  std::vector<agent::DqnAgent*> learning;  // aligned with roster, null if not
  std::size_t frozen_idx = 0;
  for (std::size_t slot = 0; slot < roster.size(); ++slot) {
    const std::uint64_t agent_seed =
        derive_seed(round_seed, 1000 + static_cast<std::uint64_t>(slot));
    switch (roster[slot].role) {
      case AgentRole::kDql:
        agents.push_back(
            std::make_unique<agent::DqnAgent>(cfg.agent, agent_seed));
        break;
      case AgentRole::kFrozenDql:
        agents.push_back(std::make_unique<agent::DqnAgent>(
            cfg.agent, agent_seed, frozen.at(frozen_idx++), true));
        break;
      case AgentRole::kRandom:
        agents.push_back(std::make_unique<agent::RandomAgent>(agent_seed));
        break;
      case AgentRole::kPersistent:
        agents.push_back(std::make_unique<agent::PersistentAgent>(agent_seed));
        break;
    }
    auto* dql = dynamic_cast<agent::DqnAgent*>(agents.back().get());
    learning.push_back(dql != nullptr && !dql->frozen() ? dql : nullptr);
  }

  auto write_scheduled = [&](int completed_sims) {
    if (cfg.out_dir.empty()) return;
    if (std::find(cfg.checkpoint_schedule.begin(),
                  cfg.checkpoint_schedule.end(),
                  completed_sims) == cfg.checkpoint_schedule.end())
      return;
    for (std::size_t slot = 0; slot < roster.size(); ++slot) {
      if (learning[slot] == nullptr) continue;
      nn::save_checkpoint(ckpt_path(cfg.out_dir, roster[slot].name,
                                    single_learner, round, completed_sims),
                          learning[slot]->checkpoint());
    }
  };

  RoundOutput out;
  out.totals.reserve(static_cast<std::size_t>(cfg.simulations));
  for (int sim = 0; sim < cfg.simulations; ++sim) {
    write_scheduled(sim);
    env::MMArena arena(cfg.arena, static_cast<int>(roster.size()),
                       derive_seed(round_seed, static_cast<std::uint64_t>(sim)));
    if (cfg.dump_ledger && !cfg.out_dir.empty()) arena.enable_ledger_log();
    out.totals.push_back(run_simulation(arena, agents, cfg.steps, round, sim,
                                        record_actions ? &out.actions
                                                       : nullptr));
    if (cfg.dump_ledger && !cfg.out_dir.empty())
      write_ledger_csv(cfg.out_dir + "/ledger/ledger_round" +
                           std::to_string(round) + "_sim" +
                           std::to_string(sim) + ".csv",
                       arena.ledger_rows(), roster);
  }
  write_scheduled(cfg.simulations);
  return out;
}

int thread_cap(int rounds) {
  if (const char* env = std::getenv("MM_ARENA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, rounds);
  }
  return rounds;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<std::int64_t> run_simulation(
    env::MMArena& arena, std::span<std::unique_ptr<agent::MMAgentBase>> agents,
    int steps, int round, int simulation,
    std::vector<ActionRec>* actions_out) {
  const auto mms = agents.size();
  if (static_cast<int>(mms) != arena.mm_count())
    throw std::invalid_argument("agent count does not match arena");
  for (auto& a : agents) a->begin_simulation();

  std::vector<env::StateVector> states = arena.initial_states();
  std::vector<env::RewardBreakdown> prev_rewards;
  std::vector<env::MMAction> actions(mms);
  for (int t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < mms; ++i) {
      actions[i] = agents[i]->act(states[i], reward_at(prev_rewards, i));
      if (actions_out != nullptr)
        actions_out->push_back(ActionRec{
            round, simulation, t, static_cast<std::int16_t>(i),
            static_cast<std::int8_t>(actions[i].buy_index()),
            static_cast<std::int8_t>(actions[i].sell_index()),
            static_cast<std::int8_t>(actions[i].hedge_index())});
    }
    auto out = arena.step(actions);
    states = std::move(out.states);
    prev_rewards = std::move(out.rewards);
  }
  const auto final_rewards = arena.finish();
  for (std::size_t i = 0; i < mms; ++i)
    agents[i]->end_simulation(states[i], reward_at(prev_rewards, i),
                              reward_at(final_rewards, i));
  return arena.totals();
}

ResultsDataset run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  // Fail fast on anything the rounds will need.
  std::vector<nn::Checkpoint> frozen;
  for (const std::string& path : cfg.frozen_checkpoints)
    frozen.push_back(nn::load_checkpoint(path));
  const auto roster = cfg.roster();
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    fs::create_directories(cfg.out_dir + "/checkpoints");
    const int learners = static_cast<int>(
        std::count_if(roster.begin(), roster.end(), [](const RosterSlot& s) {
          return s.role == AgentRole::kDql;
        }));
    if (learners > 1)
      for (const RosterSlot& s : roster)
        if (s.role == AgentRole::kDql)
          fs::create_directories(cfg.out_dir + "/checkpoints/" + s.name);
    if (cfg.dump_ledger) fs::create_directories(cfg.out_dir + "/ledger");
  }

  std::vector<RoundOutput> rounds(static_cast<std::size_t>(cfg.rounds));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.rounds));
  std::atomic<int> next{0};
  const int workers = thread_cap(cfg.rounds);
  auto work = [&]() {
    for (int r = next.fetch_add(1); r < cfg.rounds; r = next.fetch_add(1)) {
      try {
        rounds[static_cast<std::size_t>(r)] = run_round(cfg, r, frozen, true);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  ResultsDataset ds;
  for (const RosterSlot& s : roster) ds.roster.push_back(s.name);
  ds.seed = cfg.seed;
  ds.rounds = cfg.rounds;
  ds.simulations = cfg.simulations;
  ds.config_hash = config_hash(cfg);
  for (int r = 0; r < cfg.rounds; ++r) {
    const RoundOutput& ro = rounds[static_cast<std::size_t>(r)];
    for (int sim = 0; sim < cfg.simulations; ++sim)
      for (std::size_t mm = 0; mm < roster.size(); ++mm)
        ds.results.push_back(
            ResultRow{r, sim, static_cast<int>(mm),
                      ro.totals[static_cast<std::size_t>(sim)][mm]});
    ds.actions.insert(ds.actions.end(), ro.actions.begin(), ro.actions.end());
  }

  if (!cfg.out_dir.empty()) {
    write_results_csv(cfg.out_dir + "/results.csv", ds);
    write_actions_csv(cfg.out_dir + "/actions.csv", ds);
    nlohmann::json meta;
    meta["schema_version"] = 1;
    meta["config_hash"] = ds.config_hash;
    meta["experiment"] = to_string(cfg.kind);
    meta["seed"] = cfg.seed;
    meta["rounds"] = cfg.rounds;
    meta["simulations"] = cfg.simulations;
    meta["steps"] = cfg.steps;
    meta["roster"] = ds.roster;
    meta["created"] = utc_timestamp();
    std::ofstream out(cfg.out_dir + "/metadata.json", std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + cfg.out_dir +
                               "/metadata.json");
    out << meta.dump(2) << '\n';
  }
  return ds;
}

std::vector<EvalResult> evaluate_checkpoints(
    const std::vector<EvalEntry>& entries, const EvalConfig& cfg) {
  if (entries.empty()) throw std::invalid_argument("no checkpoints to evaluate");
  std::vector<EvalResult> results;
  for (const EvalEntry& entry : entries) {
    nn::Checkpoint ckpt;
    try {
      ckpt = nn::load_checkpoint(entry.path);
    } catch (const std::exception& e) {
      throw std::runtime_error("checkpoint for simulation " +
                               std::to_string(entry.sim_index) +
                               " unavailable: " + e.what());
    }
    std::vector<std::unique_ptr<agent::MMAgentBase>> agents;
    agents.push_back(std::make_unique<agent::DqnAgent>(
        cfg.agent, derive_seed(cfg.seed, stream::kEval, 9000), ckpt, true));
    agents.push_back(std::make_unique<agent::RandomAgent>(
        derive_seed(cfg.seed, stream::kEval, 9001)));
    agents.push_back(std::make_unique<agent::PersistentAgent>(
        derive_seed(cfg.seed, stream::kEval, 9002)));
    double sum = 0.0;
    for (int sim = 0; sim < cfg.simulations; ++sim) {
      env::MMArena arena(
          cfg.arena, static_cast<int>(agents.size()),
          derive_seed(cfg.seed, stream::kEval, static_cast<std::uint64_t>(sim)));
      const auto totals =
          run_simulation(arena, agents, cfg.steps, 0, sim, nullptr);
      sum += static_cast<double>(totals.at(0));
    }
    results.push_back(
        EvalResult{entry.sim_index, sum / cfg.simulations});
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const EvalResult& a, const EvalResult& b) {
                     if (a.mean_reward != b.mean_reward)
                       return a.mean_reward > b.mean_reward;
                     return a.sim_index < b.sim_index;
                   });
  return results;
}

std::vector<FeatureImportance> permutation_importance(
    const nn::MLP& net, const nn::Standardizer& std_,
    std::span<const env::StateVector> probes, Rng& rng) {
  if (probes.size() < 100)
    throw std::invalid_argument("need >= 100 probe states");
  const auto n = probes.size();
  std::vector<int> baseline(n);
  std::vector<std::array<double, env::StateVector::kFeatures>> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = probes[i].to_array();
    baseline[i] = agent::greedy_action(forward(net, std_, xs[i]));
  }
  std::vector<FeatureImportance> rows;
  const auto& names = env::StateVector::feature_names();
  for (std::size_t f = 0; f < env::StateVector::kFeatures; ++f) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = xs[i];
      x[f] = xs[perm[i]][f];
      if (agent::greedy_action(forward(net, std_, x)) != baseline[i])
        ++changed;
    }
    rows.push_back(FeatureImportance{static_cast<int>(f), names[f],
                                     static_cast<double>(changed) /
                                         static_cast<double>(n)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.importance > b.importance;
                   });
  return rows;
}

std::vector<env::StateVector> collect_probe_states(
    const nn::Checkpoint& ckpt, const env::ArenaConfig& arena_cfg,
    const agent::DqnConfig& agent_cfg, int count, int steps,
    std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("probe count must be >= 1");
  std::vector<std::unique_ptr<agent::MMAgentBase>> agents;
  agents.push_back(std::make_unique<agent::DqnAgent>(
      agent_cfg, derive_seed(seed, stream::kImportance, 9000), ckpt, true));
  agents.push_back(std::make_unique<agent::RandomAgent>(
      derive_seed(seed, stream::kImportance, 9001)));
  agents.push_back(std::make_unique<agent::PersistentAgent>(
      derive_seed(seed, stream::kImportance, 9002)));

  std::vector<env::StateVector> probes;
  probes.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t sim = 0; static_cast<int>(probes.size()) < count; ++sim) {
    env::MMArena arena(arena_cfg, static_cast<int>(agents.size()),
                       derive_seed(seed, stream::kImportance, sim));
    for (auto& a : agents) a->begin_simulation();
    auto states = arena.initial_states();
    std::vector<env::RewardBreakdown> prev;
    std::vector<env::MMAction> actions(agents.size());
    for (int t = 0; t < steps && static_cast<int>(probes.size()) < count; ++t) {
      for (std::size_t i = 0; i < agents.size(); ++i)
        actions[i] = agents[i]->act(states[i], reward_at(prev, i));
      probes.push_back(states[0]);
      auto out = arena.step(actions);
      states = std::move(out.states);
      prev = std::move(out.rewards);
    }
    const auto final_rewards = arena.finish();
    for (std::size_t i = 0; i < agents.size(); ++i)
      agents[i]->end_simulation(states[i], reward_at(prev, i),
                                reward_at(final_rewards, i));
  }
  return probes;
}

}  // namespace mmarena::exp
