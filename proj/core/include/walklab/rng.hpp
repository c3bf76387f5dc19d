#pragma once

#include <cstdint>

namespace walklab {

// SplitMix64 output function evaluated at an arbitrary counter position.
// Stateless: the value at (seed, i) never depends on evaluation order, which is
// what lets a G(n,p) draw be a pure function of (n, p, seed).
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// 53-bit mantissa, uniform on [0,1)
inline double uniform01_at(std::uint64_t seed, std::uint64_t i) {
  return static_cast<double>(splitmix64_at(seed, i) >> 11) * 0x1.0p-53;
}

// derived stream keys: trial seeds, per-attempt seeds, pair streams
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64_at(seed, tag);
}

// sequential counter-based stream
struct CounterRng {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() { return splitmix64_at(key, counter++); }
  double next_uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  // uniform on {0, ..., bound-1}, rejection sampling so there is no modulo bias
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~0ULL - (~0ULL % bound + 1) % bound;
    std::uint64_t x = next_u64();
    while (x > limit) x = next_u64();
    return x % bound;
  }
};

}  // namespace walklab
