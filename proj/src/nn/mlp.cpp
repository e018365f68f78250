#include "mmarena/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace mmarena::nn {

MLP::MLP(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("need >= 2 layer sizes");
  for (int n : sizes_)
    if (n < 1) throw std::invalid_argument("layer sizes must be >= 1");
  std::size_t total = 0;
  for (int l = 0; l + 1 < static_cast<int>(sizes_.size()); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    weight_offset_.push_back(total);
    total += out * in;
    bias_offset_.push_back(total);
    total += out;
  }
  params_.assign(total, 0.0);
}

MLP MLP::glorot(std::vector<int> sizes, Rng& rng) {
  MLP net(std::move(sizes));
  for (int l = 0; l < net.layer_count(); ++l) {
    const double fan_in = net.sizes_[l];
    const double fan_out = net.sizes_[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (double& w : net.weights(l)) w = u(rng);
  }
  return net;
}

std::span<double> MLP::weights(int layer) {
  const auto in = static_cast<std::size_t>(sizes_[layer]);
  const auto out = static_cast<std::size_t>(sizes_[layer + 1]);
  return {params_.data() + weight_offset_[static_cast<std::size_t>(layer)],
          out * in};
}

std::span<const double> MLP::weights(int layer) const {
  return const_cast<MLP*>(this)->weights(layer);
}

std::span<double> MLP::biases(int layer) {
  const auto out = static_cast<std::size_t>(sizes_[layer + 1]);
  return {params_.data() + bias_offset_[static_cast<std::size_t>(layer)], out};
}

std::span<const double> MLP::biases(int layer) const {
  return const_cast<MLP*>(this)->biases(layer);
}

std::vector<double> MLP::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_size())
    throw std::invalid_argument("input length mismatch");
  std::vector<double> act(x.begin(), x.end());
  for (int l = 0; l < layer_count(); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const auto w = weights(l);
    const auto b = biases(l);
    std::vector<double> next(out);
    for (std::size_t j = 0; j < out; ++j) {
      double sum = b[j];
      const double* row = w.data() + j * in;
      for (std::size_t i = 0; i < in; ++i) sum += row[i] * act[i];
      next[j] = (l + 1 < layer_count() && sum < 0.0) ? 0.0 : sum;
    }
    act = std::move(next);
  }
  return act;
}

std::vector<double> forward(const MLP& net, const Standardizer& std,
                            std::span<const double> x) {
  return net.forward(std.apply(x));
}

double backward_mae(const MLP& net, const Standardizer& std,
                    std::span<const Sample> batch, std::span<double> grad) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (grad.size() != net.param_count())
    throw std::invalid_argument("gradient buffer size mismatch");
  for (double& g : grad) g = 0.0;

  const int layers = net.layer_count();
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;

  for (const Sample& sample : batch) {
    if (sample.action_index < 0 || sample.action_index >= net.output_size())
      throw std::invalid_argument("action index out of range");

    // Forward, keeping each layer's input activations and pre-activations.
    std::vector<std::vector<double>> acts;   // acts[l] feeds layer l
    std::vector<std::vector<double>> pre;    // pre[l]: layer l pre-activation
    acts.push_back(std.apply(sample.x));
    for (int l = 0; l < layers; ++l) {
      const auto in = static_cast<std::size_t>(net.sizes()[l]);
      const auto out = static_cast<std::size_t>(net.sizes()[l + 1]);
      const auto w = net.weights(l);
      const auto b = net.biases(l);
      std::vector<double> z(out);
      for (std::size_t j = 0; j < out; ++j) {
        double sum = b[j];
        const double* row = w.data() + j * in;
        for (std::size_t i = 0; i < in; ++i) sum += row[i] * acts[l][i];
        z[j] = sum;
      }
      pre.push_back(z);
      if (l + 1 < layers)
        for (double& v : z)
          if (v < 0.0) v = 0.0;
      acts.push_back(std::move(z));
    }

    const auto a = static_cast<std::size_t>(sample.action_index);
    const double residual = acts.back()[a] - sample.target;
    loss += std::abs(residual) * inv_n;
    const double g =
        (residual > 0.0 ? 1.0 : residual < 0.0 ? -1.0 : 0.0) * inv_n;
    if (g == 0.0) continue;

    // Output layer touches only the taken action's row.
    {
      const int l = layers - 1;
      const auto in = static_cast<std::size_t>(net.sizes()[l]);
      double* gw = grad.data() + (net.weights(l).data() - net.params().data());
      double* gb = grad.data() + (net.biases(l).data() - net.params().data());
      for (std::size_t i = 0; i < in; ++i)
        gw[a * in + i] += g * acts[static_cast<std::size_t>(l)][i];
      gb[a] += g;
    }

    if (layers < 2) continue;

    // delta for the last hidden layer, then dense backprop down.
    std::vector<double> delta;
    {
      const int l = layers - 1;
      const auto in = static_cast<std::size_t>(net.sizes()[l]);
      const auto w = net.weights(l);
      delta.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (pre[static_cast<std::size_t>(l) - 1][i] > 0.0)
          delta[i] = w[a * in + i] * g;
      }
    }
    for (int l = layers - 2; l >= 0; --l) {
      const auto in = static_cast<std::size_t>(net.sizes()[l]);
      const auto out = static_cast<std::size_t>(net.sizes()[l + 1]);
      const auto w = net.weights(l);
      double* gw = grad.data() + (net.weights(l).data() - net.params().data());
      double* gb = grad.data() + (net.biases(l).data() - net.params().data());
      for (std::size_t j = 0; j < out; ++j) {
        const double d = delta[j];
        if (d == 0.0) continue;
        double* grow = gw + j * in;
        for (std::size_t i = 0; i < in; ++i)
          grow[i] += d * acts[static_cast<std::size_t>(l)][i];
        gb[j] += d;
      }
      if (l == 0) break;
      std::vector<double> next(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (pre[static_cast<std::size_t>(l) - 1][i] <= 0.0) continue;
        double sum = 0.0;
        for (std::size_t j = 0; j < out; ++j)
          if (delta[j] != 0.0) sum += w[j * in + i] * delta[j];
        next[i] = sum;
      }
      delta = std::move(next);
    }
  }
  return loss;
}

}  // namespace mmarena::nn
