#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmarena/nn/mlp.hpp"

namespace mmarena::nn {

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam over a flat parameter array (bias-corrected moments).
class Adam {
 public:
  explicit Adam(std::size_t param_count, AdamConfig config = {});

  void step(std::span<double> params, std::span<const double> grad);

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

// One minibatch: MAE loss through each sample's taken action, one Adam
// update. Returns the pre-update batch loss.
double train_batch(MLP& net, Adam& adam, const Standardizer& std,
                   std::span<const Sample> batch);

}  // namespace mmarena::nn
