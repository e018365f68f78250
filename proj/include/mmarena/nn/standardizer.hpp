#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmarena::nn {

// Per-feature (x - mean) / std with population std floored at 1e-8.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std_dev;

  static constexpr double kStdFloor = 1e-8;

  static Standardizer identity(std::size_t features) {
    Standardizer s;
    s.mean.assign(features, 0.0);
    s.std_dev.assign(features, 1.0);
    return s;
  }

  template <typename SampleRange>
  static Standardizer fit(const SampleRange& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("standardizer needs >= 2 samples");
    const std::size_t features = samples.front().size();
    Standardizer s;
    s.mean.assign(features, 0.0);
    s.std_dev.assign(features, 0.0);
    for (const auto& x : samples) {
      if (x.size() != features)
        throw std::invalid_argument("inconsistent sample width");
      for (std::size_t j = 0; j < features; ++j) s.mean[j] += x[j];
    }
    for (std::size_t j = 0; j < features; ++j)
      s.mean[j] /= static_cast<double>(n);
    for (const auto& x : samples)
      for (std::size_t j = 0; j < features; ++j) {
        const double d = x[j] - s.mean[j];
        s.std_dev[j] += d * d;
      }
    for (std::size_t j = 0; j < features; ++j)
      s.std_dev[j] =
          std::max(std::sqrt(s.std_dev[j] / static_cast<double>(n)), kStdFloor);
    return s;
  }

  std::size_t features() const { return mean.size(); }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean.size())
      throw std::invalid_argument("standardizer width mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      out[j] = (x[j] - mean[j]) / std_dev[j];
    return out;
  }
};

}  // namespace mmarena::nn
