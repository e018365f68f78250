#pragma once
#include <cstdint>
#include <random>

namespace mmarena {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to derive well-separated seeds from
// (master seed, tag...) tuples so that every simulation/agent owns an
// independent stream.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed) { return mix64(seed); }

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    Tags... rest) {
  return derive_seed(mix64(seed ^ mix64(tag)), rest...);
}

// Stream tags, so reordering agent rosters never perturbs market noise.
namespace stream {
inline constexpr std::uint64_t kMarket = 0x11;
inline constexpr std::uint64_t kInvestorSides = 0x22;
inline constexpr std::uint64_t kTieBreak = 0x33;
inline constexpr std::uint64_t kAgent = 0x44;
inline constexpr std::uint64_t kRound = 0x55;
inline constexpr std::uint64_t kEval = 0x66;
inline constexpr std::uint64_t kImportance = 0x77;
}  // namespace stream

template <typename... Tags>
Rng make_rng(std::uint64_t seed, Tags... tags) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(tags)...));
}

}  // namespace mmarena
