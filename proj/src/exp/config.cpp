#include "mmarena/exp/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace mmarena::exp {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSingle: return "single";
    case ExperimentKind::kMulti: return "multi";
    case ExperimentKind::kTransfer: return "transfer";
  }
  throw std::logic_error("bad experiment kind");
}

ExperimentKind kind_from_string(const std::string& text) {
  if (text == "single") return ExperimentKind::kSingle;
  if (text == "multi") return ExperimentKind::kMulti;
  if (text == "transfer") return ExperimentKind::kTransfer;
  throw std::invalid_argument("unknown experiment kind '" + text +
                              "' (expected single|multi|transfer)");
}

void ExperimentConfig::validate() const {
  if (simulations < 1) throw std::invalid_argument("simulations must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  arena.validate();
  if (agent.gamma < 0.0 || agent.gamma > 1.0)
    throw std::invalid_argument("gamma must be in [0,1]");
  if (agent.retrain_interval < 1)
    throw std::invalid_argument("retrain_interval must be >= 1");
  if (agent.minibatch < 1) throw std::invalid_argument("minibatch must be >= 1");
  if (agent.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (agent.hidden.empty())
    throw std::invalid_argument("at least one hidden layer required");
  for (int h : agent.hidden)
    if (h < 1) throw std::invalid_argument("hidden sizes must be >= 1");
  if (!(agent.eps_start >= 0.0 && agent.eps_start <= 1.0) ||
      !(agent.eps_min >= 0.0 && agent.eps_min <= agent.eps_start) ||
      !(agent.eps_decay > 0.0 && agent.eps_decay <= 1.0))
    throw std::invalid_argument("bad exploration schedule");
  for (int k : checkpoint_schedule)
    if (k < 0) throw std::invalid_argument("checkpoint schedule entries >= 0");
  if (kind == ExperimentKind::kTransfer) {
    if (frozen_checkpoints.size() != 2)
      throw std::invalid_argument(
          "transfer experiment needs exactly 2 frozen checkpoints");
  } else if (!frozen_checkpoints.empty()) {
    throw std::invalid_argument(
        "frozen_checkpoints only apply to the transfer experiment");
  }
}

std::vector<RosterSlot> ExperimentConfig::roster() const {
  std::vector<RosterSlot> slots;
  switch (kind) {
    case ExperimentKind::kSingle:
      slots.push_back({"dql", AgentRole::kDql, {}});
      break;
    case ExperimentKind::kMulti:
      slots.push_back({"dql_0", AgentRole::kDql, {}});
      slots.push_back({"dql_1", AgentRole::kDql, {}});
      slots.push_back({"dql_2", AgentRole::kDql, {}});
      break;
    case ExperimentKind::kTransfer:
      slots.push_back(
          {"frozen_0", AgentRole::kFrozenDql, frozen_checkpoints.at(0)});
      slots.push_back(
          {"frozen_1", AgentRole::kFrozenDql, frozen_checkpoints.at(1)});
      slots.push_back({"dql", AgentRole::kDql, {}});
      break;
  }
  slots.push_back({"random", AgentRole::kRandom, {}});
  slots.push_back({"persistent", AgentRole::kPersistent, {}});
  return slots;
}

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& item : obj.items())
    if (!known.contains(item.key()))
      throw std::runtime_error("config: unknown key '" + item.key() +
                                  "' in " + where);
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: parse error in " + path + ": " +
                                e.what());
  }
  try {
    ExperimentConfig cfg;
    reject_unknown(j,
                   {"schema_version", "experiment", "simulations", "rounds",
                    "steps", "seed", "out_dir", "market", "arena", "agent",
                    "checkpoint_schedule", "frozen_checkpoints", "dump_ledger"},
                   "top level");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
      throw std::runtime_error("config: unsupported schema_version");
    if (j.contains("experiment"))
      cfg.kind = kind_from_string(j.at("experiment").get<std::string>());
    read(j, "simulations", cfg.simulations);
    read(j, "rounds", cfg.rounds);
    read(j, "steps", cfg.steps);
    read(j, "seed", cfg.seed);
    read(j, "out_dir", cfg.out_dir);
    read(j, "checkpoint_schedule", cfg.checkpoint_schedule);
    read(j, "frozen_checkpoints", cfg.frozen_checkpoints);
    read(j, "dump_ledger", cfg.dump_ledger);
    if (j.contains("market")) {
      const auto& m = j.at("market");
      reject_unknown(m,
                     {"fundamental_mean", "fundamental_kappa",
                      "fundamental_sigma", "noise_agents", "noise_order_size",
                      "noise_max_offset", "value_agents", "value_order_size",
                      "value_threshold", "momentum_agents",
                      "momentum_order_size", "momentum_fast", "momentum_slow",
                      "pov_interval", "pov_half_spread", "pov_depth"},
                     "market");
      auto& mk = cfg.arena.market;
      read(m, "fundamental_mean", mk.fundamental_mean);
      read(m, "fundamental_kappa", mk.fundamental_kappa);
      read(m, "fundamental_sigma", mk.fundamental_sigma);
      read(m, "noise_agents", mk.noise_agents);
      read(m, "noise_order_size", mk.noise_order_size);
      read(m, "noise_max_offset", mk.noise_max_offset);
      read(m, "value_agents", mk.value_agents);
      read(m, "value_order_size", mk.value_order_size);
      read(m, "value_threshold", mk.value_threshold);
      read(m, "momentum_agents", mk.momentum_agents);
      read(m, "momentum_order_size", mk.momentum_order_size);
      read(m, "momentum_fast", mk.momentum_fast);
      read(m, "momentum_slow", mk.momentum_slow);
      read(m, "pov_interval", mk.pov_interval);
      read(m, "pov_half_spread", mk.pov_half_spread);
      read(m, "pov_depth", mk.pov_depth);
    }
    if (j.contains("arena")) {
      const auto& a = j.at("arena");
      reject_unknown(a, {"investors", "investor_order_size"}, "arena");
      read(a, "investors", cfg.arena.investors);
      read(a, "investor_order_size", cfg.arena.investor_order_size);
    }
    if (j.contains("agent")) {
      const auto& a = j.at("agent");
      reject_unknown(a,
                     {"hidden", "gamma", "retrain_interval", "minibatch",
                      "epochs", "alpha", "beta1", "beta2", "eps_start",
                      "eps_decay", "eps_min"},
                     "agent");
      read(a, "hidden", cfg.agent.hidden);
      read(a, "gamma", cfg.agent.gamma);
      read(a, "retrain_interval", cfg.agent.retrain_interval);
      read(a, "minibatch", cfg.agent.minibatch);
      read(a, "epochs", cfg.agent.epochs);
      read(a, "alpha", cfg.agent.adam.alpha);
      read(a, "beta1", cfg.agent.adam.beta1);
      read(a, "beta2", cfg.agent.adam.beta2);
      read(a, "eps_start", cfg.agent.eps_start);
      read(a, "eps_decay", cfg.agent.eps_decay);
      read(a, "eps_min", cfg.agent.eps_min);
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: malformed field in " + path + ": " +
                                e.what());
  }
}

std::string config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["experiment"] = to_string(cfg.kind);
  j["simulations"] = cfg.simulations;
  j["rounds"] = cfg.rounds;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  const auto& mk = cfg.arena.market;
  j["market"] = {{"fundamental_mean", mk.fundamental_mean},
                 {"fundamental_kappa", mk.fundamental_kappa},
                 {"fundamental_sigma", mk.fundamental_sigma},
                 {"noise_agents", mk.noise_agents},
                 {"noise_order_size", mk.noise_order_size},
                 {"noise_max_offset", mk.noise_max_offset},
                 {"value_agents", mk.value_agents},
                 {"value_order_size", mk.value_order_size},
                 {"value_threshold", mk.value_threshold},
                 {"momentum_agents", mk.momentum_agents},
                 {"momentum_order_size", mk.momentum_order_size},
                 {"momentum_fast", mk.momentum_fast},
                 {"momentum_slow", mk.momentum_slow},
                 {"pov_interval", mk.pov_interval},
                 {"pov_half_spread", mk.pov_half_spread},
                 {"pov_depth", mk.pov_depth}};
  j["arena"] = {{"investors", cfg.arena.investors},
                {"investor_order_size", cfg.arena.investor_order_size}};
  j["agent"] = {{"hidden", cfg.agent.hidden},
                {"gamma", cfg.agent.gamma},
                {"retrain_interval", cfg.agent.retrain_interval},
                {"minibatch", cfg.agent.minibatch},
                {"epochs", cfg.agent.epochs},
                {"alpha", cfg.agent.adam.alpha},
                {"beta1", cfg.agent.adam.beta1},
                {"beta2", cfg.agent.adam.beta2},
                {"eps_start", cfg.agent.eps_start},
                {"eps_decay", cfg.agent.eps_decay},
                {"eps_min", cfg.agent.eps_min}};
  j["checkpoint_schedule"] = cfg.checkpoint_schedule;
  j["frozen_checkpoints"] = cfg.frozen_checkpoints;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mmarena::exp
