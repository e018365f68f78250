#include "mmarena/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace mmarena::nn {

Adam::Adam(std::size_t param_count, AdamConfig config)
    : cfg_(config), m_(param_count, 0.0), v_(param_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("adam size mismatch");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= cfg_.alpha * m_hat / (std::sqrt(v_hat) + cfg_.eps);
  }
}

double train_batch(MLP& net, Adam& adam, const Standardizer& std,
                   std::span<const Sample> batch) {
  std::vector<double> grad(net.param_count());
  const double loss = backward_mae(net, std, batch, grad);
  adam.step(net.params(), grad);
  return loss;
}

}  // namespace mmarena::nn
