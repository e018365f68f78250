#include "mmarena/nn/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmarena::nn {
namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                            (static_cast<std::uint32_t>(bytes[i + 1]) << 8) |
                            bytes[i + 2];
    out += kAlphabet[(v >> 18) & 0x3f];
    out += kAlphabet[(v >> 12) & 0x3f];
    out += kAlphabet[(v >> 6) & 0x3f];
    out += kAlphabet[v & 0x3f];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = static_cast<std::uint32_t>(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 0x3f];
    out += kAlphabet[(v >> 12) & 0x3f];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (static_cast<std::uint32_t>(bytes[i]) << 16) |
                            (static_cast<std::uint32_t>(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 0x3f];
    out += kAlphabet[(v >> 12) & 0x3f];
    out += kAlphabet[(v >> 6) & 0x3f];
    out += '=';
  }
  return out;
}

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0)
    throw std::runtime_error("checkpoint: malformed base64 length");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2)
          throw std::runtime_error("checkpoint: malformed base64 padding");
        vals[k] = 0;
        ++pad;
      } else {
        if (pad > 0)
          throw std::runtime_error("checkpoint: malformed base64 padding");
        vals[k] = decode_char(c);
        if (vals[k] < 0)
          throw std::runtime_error("checkpoint: invalid base64 character");
      }
    }
    const std::uint32_t v =
        (static_cast<std::uint32_t>(vals[0]) << 18) |
        (static_cast<std::uint32_t>(vals[1]) << 12) |
        (static_cast<std::uint32_t>(vals[2]) << 6) |
        static_cast<std::uint32_t>(vals[3]);
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

std::string encode_floats(const std::vector<float>& values) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(values.size() * 4);
  for (float f : values) {
    const auto u = std::bit_cast<std::uint32_t>(f);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 8) & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 16) & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 24) & 0xff));
  }
  return base64_encode(bytes);
}

std::vector<float> decode_floats(const std::string& text,
                                 std::size_t expected) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != expected * 4)
    throw std::runtime_error("checkpoint: array size mismatch");
  std::vector<float> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const std::uint32_t u =
        static_cast<std::uint32_t>(bytes[4 * i]) |
        (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
        (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
        (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    out[i] = std::bit_cast<float>(u);
  }
  return out;
}

std::vector<float> to_f32(std::span<const double> values) {
  std::vector<float> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = static_cast<float>(values[i]);
  return out;
}

}  // namespace

Checkpoint make_checkpoint(const MLP& net, const Standardizer& std,
                           double epsilon, std::int64_t step) {
  if (std.features() != static_cast<std::size_t>(net.input_size()))
    throw std::invalid_argument("standardizer does not match net input");
  Checkpoint ckpt;
  ckpt.shapes = net.sizes();
  for (int l = 0; l < net.layer_count(); ++l) {
    ckpt.weights.push_back(to_f32(net.weights(l)));
    ckpt.biases.push_back(to_f32(net.biases(l)));
  }
  ckpt.std_mean = to_f32(std.mean);
  ckpt.std_std = to_f32(std.std_dev);
  ckpt.epsilon = epsilon;
  ckpt.step = step;
  return ckpt;
}

MLP net_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.shapes.size() < 2)
    throw std::runtime_error("checkpoint: needs >= 2 layer sizes");
  for (int n : ckpt.shapes)
    if (n < 1) throw std::runtime_error("checkpoint: layer sizes must be >= 1");
  if (ckpt.weights.size() + 1 != ckpt.shapes.size() ||
      ckpt.biases.size() + 1 != ckpt.shapes.size())
    throw std::runtime_error("checkpoint: layer count mismatch");
  MLP net(ckpt.shapes);
  for (int l = 0; l < net.layer_count(); ++l) {
    const auto& w = ckpt.weights.at(static_cast<std::size_t>(l));
    const auto& b = ckpt.biases.at(static_cast<std::size_t>(l));
    auto wd = net.weights(l);
    auto bd = net.biases(l);
    if (w.size() != wd.size() || b.size() != bd.size())
      throw std::runtime_error("checkpoint: layer shape mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) wd[i] = w[i];
    for (std::size_t i = 0; i < b.size(); ++i) bd[i] = b[i];
  }
  return net;
}

Standardizer standardizer_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.shapes.empty() ||
      ckpt.std_mean.size() != static_cast<std::size_t>(ckpt.shapes.front()) ||
      ckpt.std_std.size() != ckpt.std_mean.size())
    throw std::runtime_error("checkpoint: standardizer width mismatch");
  Standardizer s;
  s.mean.assign(ckpt.std_mean.begin(), ckpt.std_mean.end());
  s.std_dev.assign(ckpt.std_std.begin(), ckpt.std_std.end());
  return s;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json j;
  j["version"] = ckpt.version;
  j["shapes"] = ckpt.shapes;
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : ckpt.weights) weights.push_back(encode_floats(w));
  j["weights"] = weights;
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& b : ckpt.biases) biases.push_back(encode_floats(b));
  j["biases"] = biases;
  j["std_mean"] = encode_floats(ckpt.std_mean);
  j["std_std"] = encode_floats(ckpt.std_std);
  j["epsilon"] = ckpt.epsilon;
  j["step"] = ckpt.step;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint: parse error in " + path + ": " +
                             e.what());
  }
  Checkpoint ckpt;
  try {
    ckpt.version = j.at("version").get<std::string>();
    if (ckpt.version != "1")
      throw std::runtime_error("checkpoint: unsupported version '" +
                               ckpt.version + "' in " + path);
    ckpt.shapes = j.at("shapes").get<std::vector<int>>();
    if (ckpt.shapes.size() < 2)
      throw std::runtime_error("checkpoint: bad shapes in " + path);
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    const std::size_t layers = ckpt.shapes.size() - 1;
    if (weights.size() != layers || biases.size() != layers)
      throw std::runtime_error("checkpoint: layer count mismatch in " + path);
    for (std::size_t l = 0; l < layers; ++l) {
      const auto in_n = static_cast<std::size_t>(ckpt.shapes[l]);
      const auto out_n = static_cast<std::size_t>(ckpt.shapes[l + 1]);
      ckpt.weights.push_back(
          decode_floats(weights.at(l).get<std::string>(), out_n * in_n));
      ckpt.biases.push_back(
          decode_floats(biases.at(l).get<std::string>(), out_n));
    }
    const auto features = static_cast<std::size_t>(ckpt.shapes.front());
    ckpt.std_mean =
        decode_floats(j.at("std_mean").get<std::string>(), features);
    ckpt.std_std = decode_floats(j.at("std_std").get<std::string>(), features);
    ckpt.epsilon = j.at("epsilon").get<double>();
    ckpt.step = j.at("step").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint: malformed fields in " + path + ": " +
                             e.what());
  }
  return ckpt;
}

}  // namespace mmarena::nn
