#include "mmarena/agent/agents.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mmarena::agent {

std::vector<int> DqnConfig::layer_sizes() const {
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(env::StateVector::kFeatures));
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(env::kActionCount);
  return sizes;
}

int greedy_action(std::span<const double> q) {
  if (q.empty()) throw std::invalid_argument("empty q vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] > q[best]) best = i;
  return static_cast<int>(best);
}

std::vector<double> td_targets(std::span<const Transition> batch,
                               const nn::MLP& net, const nn::Standardizer& std,
                               double gamma) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const Transition& t : batch) {
    double target = t.reward;
    if (!t.terminal && gamma != 0.0) {
      const auto arr = t.next_s.to_array();
      const auto q = forward(net, std, arr);
      target += gamma * *std::max_element(q.begin(), q.end());
    }
    targets.push_back(target);
  }
  return targets;
}

int select_action(const env::StateVector& state, const nn::MLP& net,
                  const nn::Standardizer& std, ExplorationState& expl,
                  Rng& rng, std::optional<double> forced_epsilon) {
  const double eps = forced_epsilon ? *forced_epsilon : expl.epsilon();
  std::uniform_int_distribution<int> uniform(0, net.output_size() - 1);
  int idx;
  if (eps >= 1.0) {
    idx = uniform(rng);
  } else if (eps <= 0.0) {
    const auto arr = state.to_array();
    idx = greedy_action(forward(net, std, arr));
  } else if (std::bernoulli_distribution(eps)(rng)) {
    idx = uniform(rng);
  } else {
    const auto arr = state.to_array();
    idx = greedy_action(forward(net, std, arr));
  }
  expl.advance();
  return idx;
}

namespace {

nn::MLP init_net(const DqnConfig& config, std::uint64_t seed) {
  Rng init_rng = make_rng(seed, stream::kAgent, 0);
  return nn::MLP::glorot(config.layer_sizes(), init_rng);
}

}  // namespace

DqnAgent::DqnAgent(const DqnConfig& config, std::uint64_t seed)
    : config_(config),
      net_(init_net(config, seed)),
      adam_(net_.param_count(), config.adam),
      standardizer_(
          nn::Standardizer::identity(env::StateVector::kFeatures)),
      exploration_{config.eps_start, config.eps_decay, config.eps_min, 0},
      select_rng_(make_rng(seed, stream::kAgent, 1)),
      train_rng_(make_rng(seed, stream::kAgent, 2)) {}

DqnAgent::DqnAgent(const DqnConfig& config, std::uint64_t seed,
                   const nn::Checkpoint& ckpt, bool frozen)
    : config_(config),
      net_(net_from_checkpoint(ckpt)),
      adam_(net_.param_count(), config.adam),
      standardizer_(standardizer_from_checkpoint(ckpt)),
      exploration_{config.eps_start, config.eps_decay, config.eps_min,
                   ckpt.step},
      select_rng_(make_rng(seed, stream::kAgent, 1)),
      train_rng_(make_rng(seed, stream::kAgent, 2)),
      frozen_(frozen) {
  if (net_.input_size() != static_cast<int>(env::StateVector::kFeatures) ||
      net_.output_size() != env::kActionCount)
    throw std::invalid_argument("checkpoint shape does not fit the arena");
  if (frozen_) {
    train_enabled_ = false;
    forced_epsilon_ = 0.0;
  }
}

double DqnAgent::epsilon() const {
  return forced_epsilon_ ? *forced_epsilon_ : exploration_.epsilon();
}

env::MMAction DqnAgent::act(const env::StateVector& state,
                            const std::optional<env::RewardBreakdown>& reward) {
  if (!pending_.empty() && !pending_.back().next_s)
    pending_.back().next_s = state;
  if (reward) {
    if (pending_.empty() || !pending_.front().next_s)
      throw std::logic_error("reward delivered with no matching transition");
    store(pending_.front(), static_cast<double>(reward->total), false);
    pending_.pop_front();
  }
  const int idx = select_action(state, net_, standardizer_, exploration_,
                                select_rng_, forced_epsilon_);
  pending_.push_back(Pending{state, idx, std::nullopt});
  return decode_action(idx);
}

void DqnAgent::end_simulation(
    const env::StateVector& final_state,
    const std::optional<env::RewardBreakdown>& reward_prev,
    const std::optional<env::RewardBreakdown>& reward_last) {
  if (!pending_.empty() && !pending_.back().next_s)
    pending_.back().next_s = final_state;
  if (reward_prev) {
    if (pending_.empty() || !pending_.front().next_s)
      throw std::logic_error("reward delivered with no matching transition");
    store(pending_.front(), static_cast<double>(reward_prev->total), false);
    pending_.pop_front();
  }
  if (reward_last) {
    if (pending_.empty() || !pending_.front().next_s)
      throw std::logic_error("reward delivered with no matching transition");
    store(pending_.front(), static_cast<double>(reward_last->total), true);
    pending_.pop_front();
  }
  pending_.clear();
}

void DqnAgent::store(const Pending& p, double reward, bool terminal) {
  if (!train_enabled_) return;
  buffer_.push_back(Transition{p.s, p.action_index, *p.next_s, reward,
                               terminal});
  ++transitions_stored_;
  if (transitions_stored_ % config_.retrain_interval == 0) retrain();
}

void DqnAgent::retrain() {
  if (buffer_.empty()) return;
  RetrainEvent ev;
  ev.transitions_stored = transitions_stored_;
  ev.buffer_before = buffer_.size();

  std::vector<std::array<double, env::StateVector::kFeatures>> xs;
  xs.reserve(buffer_.size());
  for (const Transition& t : buffer_) xs.push_back(t.s.to_array());
  standardizer_ = nn::Standardizer::fit(xs);

  const auto targets = td_targets(buffer_, net_, standardizer_, config_.gamma);
  std::vector<nn::Sample> samples;
  samples.reserve(buffer_.size());
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    const auto arr = buffer_[i].s.to_array();
    samples.push_back(nn::Sample{{arr.begin(), arr.end()}, targets[i],
                                 buffer_[i].action_index});
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  bool first = true;
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), train_rng_);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config_.minibatch)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config_.minibatch));
      std::vector<nn::Sample> batch;
      batch.reserve(stop - start);
      for (std::size_t k = start; k < stop; ++k)
        batch.push_back(samples[order[k]]);
      const double loss = nn::train_batch(net_, adam_, standardizer_, batch);
      if (first) {
        ev.first_batch_loss = loss;
        first = false;
      }
    }
  }

  buffer_.clear();
  ev.buffer_after = buffer_.size();
  if (observer_) observer_(ev);
}

nn::Checkpoint DqnAgent::checkpoint() const {
  return nn::make_checkpoint(net_, standardizer_, exploration_.epsilon(),
                             exploration_.selections);
}

RandomAgent::RandomAgent(std::uint64_t seed)
    : rng_(make_rng(seed, stream::kAgent, 1)) {}

env::MMAction RandomAgent::act(const env::StateVector&,
                               const std::optional<env::RewardBreakdown>&) {
  std::uniform_int_distribution<int> uniform(0, env::kActionCount - 1);
  return decode_action(uniform(rng_));
}

PersistentAgent::PersistentAgent(std::uint64_t seed)
    : rng_(make_rng(seed, stream::kAgent, 1)) {}

void PersistentAgent::begin_simulation() {
  std::uniform_int_distribution<int> uniform(0, env::kActionCount - 1);
  action_ = decode_action(uniform(rng_));
}

env::MMAction PersistentAgent::act(const env::StateVector&,
                                   const std::optional<env::RewardBreakdown>&) {
  return action_;
}

}  // namespace mmarena::agent
