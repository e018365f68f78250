#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mmarena/agent/codec.hpp"
#include "mmarena/agent/exploration.hpp"
#include "mmarena/env/types.hpp"
#include "mmarena/nn/adam.hpp"
#include "mmarena/nn/checkpoint.hpp"
#include "mmarena/nn/mlp.hpp"
#include "mmarena/rng.hpp"

namespace mmarena::agent {

struct Transition {
  env::StateVector s;
  int action_index = 0;
  env::StateVector next_s;
  double reward = 0.0;
  bool terminal = false;
};

// Argmax over q; exact ties resolve to the lowest index.
int greedy_action(std::span<const double> q);

// One-step bootstrap targets: r + gamma * max_a' Q(s') for non-terminal
// transitions, plain r for terminal ones.
std::vector<double> td_targets(std::span<const Transition> batch,
                               const nn::MLP& net, const nn::Standardizer& std,
                               double gamma);

// Epsilon-greedy selection; decays expl by one step afterwards. At eps >= 1
// the explore coin is skipped and exactly one uniform index is drawn, so the
// draw stream matches a pure random agent's.
int select_action(const env::StateVector& state, const nn::MLP& net,
                  const nn::Standardizer& std, ExplorationState& expl,
                  Rng& rng, std::optional<double> forced_epsilon = {});

// Driver contract shared by every market maker agent. Rewards settle one
// market step after the action that earned them, so act() receives the
// finalized reward of the action taken two calls earlier; the last two
// rewards arrive through end_simulation().
class MMAgentBase {
 public:
  virtual ~MMAgentBase() = default;
  virtual void begin_simulation() {}
  virtual env::MMAction act(const env::StateVector& state,
                            const std::optional<env::RewardBreakdown>& reward) = 0;
  virtual void end_simulation(
      const env::StateVector& final_state,
      const std::optional<env::RewardBreakdown>& reward_prev,
      const std::optional<env::RewardBreakdown>& reward_last) = 0;
};

struct DqnConfig {
  std::vector<int> hidden = {32, 32, 32};
  double gamma = 0.6;
  int retrain_interval = 200;
  int minibatch = 32;
  int epochs = 1;
  nn::AdamConfig adam;
  double eps_start = 0.99;
  double eps_decay = 0.99999;
  double eps_min = 0.01;

  std::vector<int> layer_sizes() const;
};

// Q-learning market maker. The learning state (net, optimizer, buffer,
// exploration counter) persists across simulations; transitions accumulate
// until the stored-transition counter hits a multiple of retrain_interval,
// then one shuffled pass over the buffer is trained and the buffer cleared.
class DqnAgent : public MMAgentBase {
 public:
  DqnAgent(const DqnConfig& config, std::uint64_t seed);
  DqnAgent(const DqnConfig& config, std::uint64_t seed,
           const nn::Checkpoint& ckpt, bool frozen);

  env::MMAction act(const env::StateVector& state,
                    const std::optional<env::RewardBreakdown>& reward) override;
  void end_simulation(
      const env::StateVector& final_state,
      const std::optional<env::RewardBreakdown>& reward_prev,
      const std::optional<env::RewardBreakdown>& reward_last) override;

  const nn::MLP& net() const { return net_; }
  const nn::Standardizer& standardizer() const { return standardizer_; }
  const DqnConfig& config() const { return config_; }
  double epsilon() const;
  std::int64_t selections() const { return exploration_.selections; }
  std::int64_t transitions_stored() const { return transitions_stored_; }
  std::size_t buffer_size() const { return buffer_.size(); }
  bool frozen() const { return frozen_; }

  void set_forced_epsilon(std::optional<double> eps) { forced_epsilon_ = eps; }
  void set_training_enabled(bool enabled) { train_enabled_ = enabled; }

  nn::Checkpoint checkpoint() const;

  struct RetrainEvent {
    std::int64_t transitions_stored = 0;
    std::size_t buffer_before = 0;
    std::size_t buffer_after = 0;
    double first_batch_loss = 0.0;
  };
  using RetrainObserver = std::function<void(const RetrainEvent&)>;
  void set_retrain_observer(RetrainObserver obs) { observer_ = std::move(obs); }

 private:
  struct Pending {
    env::StateVector s;
    int action_index = 0;
    std::optional<env::StateVector> next_s;
  };

  void store(const Pending& p, double reward, bool terminal);
  void maybe_retrain();
  void retrain();

  DqnConfig config_;
  nn::MLP net_;
  nn::Adam adam_;
  nn::Standardizer standardizer_;
  ExplorationState exploration_;
  Rng select_rng_;
  Rng train_rng_;
  std::vector<Transition> buffer_;
  std::deque<Pending> pending_;
  std::int64_t transitions_stored_ = 0;
  bool train_enabled_ = true;
  bool frozen_ = false;
  std::optional<double> forced_epsilon_;
  RetrainObserver observer_;
};

// Fresh uniform action every step; never trains.
class RandomAgent : public MMAgentBase {
 public:
  explicit RandomAgent(std::uint64_t seed);
  env::MMAction act(const env::StateVector& state,
                    const std::optional<env::RewardBreakdown>& reward) override;
  void end_simulation(const env::StateVector&,
                      const std::optional<env::RewardBreakdown>&,
                      const std::optional<env::RewardBreakdown>&) override {}

 private:
  Rng rng_;
};

// One uniform action drawn per simulation, held constant; never trains.
class PersistentAgent : public MMAgentBase {
 public:
  explicit PersistentAgent(std::uint64_t seed);
  void begin_simulation() override;
  env::MMAction act(const env::StateVector& state,
                    const std::optional<env::RewardBreakdown>& reward) override;
  void end_simulation(const env::StateVector&,
                      const std::optional<env::RewardBreakdown>&,
                      const std::optional<env::RewardBreakdown>&) override {}
  const env::MMAction& current() const { return action_; }

 private:
  Rng rng_;
  env::MMAction action_;
};

}  // namespace mmarena::agent
