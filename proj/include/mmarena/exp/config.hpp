#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmarena/agent/agents.hpp"
#include "mmarena/env/arena.hpp"

namespace mmarena::exp {

enum class ExperimentKind { kSingle, kMulti, kTransfer };

std::string to_string(ExperimentKind kind);
ExperimentKind kind_from_string(const std::string& text);

// Role of one roster slot. Frozen agents load a checkpoint, act greedily and
// never train; the baselines never train by construction.
enum class AgentRole { kDql, kFrozenDql, kRandom, kPersistent };

struct RosterSlot {
  std::string name;
  AgentRole role = AgentRole::kDql;
  std::string checkpoint_path;  // kFrozenDql only
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSingle;
  int simulations = 100;
  int rounds = 5;
  int steps = 2000;
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: keep everything in memory
  env::ArenaConfig arena;
  agent::DqnConfig agent;
  std::vector<int> checkpoint_schedule = {0,  10, 20,  30,  40,
                                          50, 100, 150, 200, 250};
  std::vector<std::string> frozen_checkpoints;  // transfer kind: exactly two
  bool dump_ledger = false;

  void validate() const;
  std::vector<RosterSlot> roster() const;
};

// JSON config file, schema_version 1. Every field is optional and defaults
// to the values above; unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);

// Canonical JSON image of a config (used for hashing and metadata).
std::string config_json(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace mmarena::exp
