#pragma once

#include <cstdint>
#include <stdexcept>

#include "walklab/graph.hpp"

namespace walklab {

struct GnpSample {
  Graph graph;
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  int attempts = 1;  // rejection draws until connected; 1 when unconditioned
};

struct sampling_exhausted : std::runtime_error {
  int attempts;
  explicit sampling_exhausted(int a)
      : std::runtime_error("no connected sample within " + std::to_string(a) +
                           " attempts"),
        attempts(a) {}
};

// canonical index of the potential edge {u,v}, u < v, in lexicographic order
inline std::uint64_t pair_index(int n, int u, int v) {
  auto uu = static_cast<std::uint64_t>(u);
  auto vv = static_cast<std::uint64_t>(v);
  return uu * static_cast<std::uint64_t>(n) - uu * (uu + 1) / 2 + (vv - uu - 1);
}

// Pure function of (n, p, seed): edge {u,v} is present iff the counter-based
// uniform draw at pair_index(n,u,v) is below p.
Graph sample_gnp(int n, double p, std::uint64_t seed);

// Rejection sampling with per-attempt derived seeds. Throws sampling_exhausted
// after max_attempts failures.
GnpSample sample_connected_gnp(int n, double p, std::uint64_t seed,
                               int max_attempts = 1000);

}  // namespace walklab
