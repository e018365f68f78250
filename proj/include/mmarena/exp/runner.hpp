#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mmarena/exp/config.hpp"
#include "mmarena/exp/dataset.hpp"
#include "mmarena/nn/checkpoint.hpp"

namespace mmarena::exp {

// Runs every round (in parallel, capped by MM_ARENA_THREADS) and pools the
// results. With a non-empty out_dir also emits results.csv, actions.csv,
// checkpoints/ and metadata.json. Invalid rosters, unreadable frozen
// checkpoints and unwritable output directories fail before any simulation.
ResultsDataset run_experiment(const ExperimentConfig& cfg);

// One episode: agents act, the arena steps, delayed rewards are fed back,
// finish() settles the last step. Returns per-MM totals; optionally records
// every chosen action.
std::vector<std::int64_t> run_simulation(
    env::MMArena& arena, std::span<std::unique_ptr<agent::MMAgentBase>> agents,
    int steps, int round, int simulation, std::vector<ActionRec>* actions_out);

struct EvalEntry {
  int sim_index = 0;
  std::string path;
};

struct EvalResult {
  int sim_index = 0;
  double mean_reward = 0.0;
};

struct EvalConfig {
  env::ArenaConfig arena;
  agent::DqnConfig agent;
  int simulations = 10;
  int steps = 2000;
  std::uint64_t seed = 1;
};

// Runs each checkpoint greedily (training off) against the two baselines on
// the same per-slot seeds and ranks by mean total reward, best first. Ties
// keep the lower simulation index first.
std::vector<EvalResult> evaluate_checkpoints(
    const std::vector<EvalEntry>& entries, const EvalConfig& cfg);

struct FeatureImportance {
  int feature = 0;
  std::string name;
  double importance = 0.0;  // fraction of probes whose greedy action changes
};

// Permutation importance of each observation feature under the greedy
// policy, ranked descending. Needs >= 100 probe states.
std::vector<FeatureImportance> permutation_importance(
    const nn::MLP& net, const nn::Standardizer& std,
    std::span<const env::StateVector> probes, Rng& rng);

// Observations seen by a frozen policy in the single-agent arena, for
// importance probing.
std::vector<env::StateVector> collect_probe_states(
    const nn::Checkpoint& ckpt, const env::ArenaConfig& arena,
    const agent::DqnConfig& agent_cfg, int count, int steps,
    std::uint64_t seed);

}  // namespace mmarena::exp
