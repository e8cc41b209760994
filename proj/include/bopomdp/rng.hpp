#pragma once

#include <cstdint>
#include <random>

namespace bopomdp {

inline constexpr std::uint64_t kSeedPhi = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix_bits(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Independent, order-free streams: the sensor stream for (seed, trial) must
// not depend on which planner consumes the planner stream.
enum class RngStream : std::uint64_t { Sensor = 1, Planner = 2 };

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial,
                                 RngStream stream) {
  std::uint64_t z = mix_bits(base + kSeedPhi * (trial + 1));
  return mix_bits(z + kSeedPhi * static_cast<std::uint64_t>(stream));
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t trial,
                                RngStream stream) {
  return std::mt19937_64(derive_seed(base, trial, stream));
}

// Per-trial seed used when fanning a base seed out over independent trials.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  return mix_bits(base + kSeedPhi * (trial + 1));
}

}  // namespace bopomdp
