#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmarena/nn/mlp.hpp"
#include "mmarena/nn/standardizer.hpp"

namespace mmarena::nn {

// Serialized policy bundle. Arrays are stored in the file as base64-encoded
// little-endian 32-bit floats; weights are per-layer, row-major.
struct Checkpoint {
  std::string version = "1";
  std::vector<int> shapes;
  std::vector<std::vector<float>> weights;
  std::vector<std::vector<float>> biases;
  std::vector<float> std_mean;
  std::vector<float> std_std;
  double epsilon = 0.0;
  std::int64_t step = 0;
};

Checkpoint make_checkpoint(const MLP& net, const Standardizer& std,
                           double epsilon, std::int64_t step);
MLP net_from_checkpoint(const Checkpoint& ckpt);
Standardizer standardizer_from_checkpoint(const Checkpoint& ckpt);

// Both throw std::runtime_error: save on an unwritable path, load on a
// missing/corrupt file or a version other than "1".
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace mmarena::nn
