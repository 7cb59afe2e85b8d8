#pragma once

#include <cstdint>
#include <random>

namespace slrank {

using Rng = std::mt19937_64;

// Independent deterministic stream `stream` derived from a master seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eed5u};
  return Rng(seq);
}

// Uniform integer in [0, bound) by rejection; bound > 0.
// Implemented here rather than via std::uniform_int_distribution so that
// outputs do not depend on the standard library in use.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t bound) {
  if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double draw_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace slrank
