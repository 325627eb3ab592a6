#pragma once

#include <cstdint>
#include <random>

namespace plstat {

using Engine = std::mt19937_64;

/// Independent sub-streams hanging off one replication index.
enum class Lane : std::uint64_t {
  Matrix = 0,
  Permutation = 1,
  LimitLaw = 2,
  Sampling = 3,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based seed derivation: (master, index, lane) -> seed. Stream r can
/// be regenerated on its own without replaying streams 0..r-1.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    Lane lane = Lane::Matrix) noexcept {
  return mix64(mix64(mix64(master) ^ index) + static_cast<std::uint64_t>(lane));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

inline Engine make_engine(std::uint64_t master, std::uint64_t index, Lane lane) {
  return Engine(derive_seed(master, index, lane));
}

/// Uniform on the open interval (0,1) with 53 random bits.
inline double uniform_open01(Engine& engine) {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = Engine::max() - (Engine::max() % bound);
  std::uint64_t draw = engine();
  while (draw >= limit) draw = engine();
  return draw % bound;
}

}  // namespace plstat
