#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmarena/nn/standardizer.hpp"
#include "mmarena/rng.hpp"

namespace mmarena::nn {

// Dense fully-connected net, rectified-linear hidden layers, identity output.
// All parameters live in one flat vector: per layer, the out×in weight block
// (row-major) followed by the bias block. Flat storage keeps the optimizer
// and checkpointing shape-agnostic.
class MLP {
 public:
  explicit MLP(std::vector<int> sizes);  // zero-initialized parameters

  // Uniform ±sqrt(6 / (fan_in + fan_out)) weights, zero biases.
  static MLP glorot(std::vector<int> sizes, Rng& rng);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }

  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<double> weights(int layer);
  std::span<const double> weights(int layer) const;
  std::span<double> biases(int layer);
  std::span<const double> biases(int layer) const;

  std::vector<double> forward(std::span<const double> x) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
  std::vector<double> params_;

  friend double backward_mae(const MLP&, const Standardizer&,
                             std::span<const struct Sample>,
                             std::span<double>);
};

struct Sample {
  std::vector<double> x;  // raw observation; standardized inside
  double target = 0.0;
  int action_index = 0;
};

// Standardize-then-forward, the canonical inference path.
std::vector<double> forward(const MLP& net, const Standardizer& std,
                            std::span<const double> x);

// Gradient of mean |q[action] - target| over the batch, written to `grad`
// (same layout as net.params()). Gradient flows only through each sample's
// taken-action output; the subgradient at a zero residual is 0. Returns the
// batch loss.
double backward_mae(const MLP& net, const Standardizer& std,
                    std::span<const Sample> batch, std::span<double> grad);

}  // namespace mmarena::nn
