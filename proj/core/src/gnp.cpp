#include "walklab/gnp.hpp"

#include <stdexcept>

#include "walklab/rng.hpp"

namespace walklab {

Graph sample_gnp(int n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gnp: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_gnp: p must lie in [0,1]");
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  std::size_t m = 0;
  for (int u = 0; u + 1 < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (uniform01_at(seed, pair_index(n, u, v)) < p) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
        ++m;
      }
    }
  }
  g.m = m;  // adjacency is built in ascending order, already sorted
  return g;
}

GnpSample sample_connected_gnp(int n, double p, std::uint64_t seed,
                               int max_attempts) {
  if (max_attempts < 1)
    throw std::invalid_argument("sample_connected_gnp: max_attempts must be >= 1");
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    Graph g = sample_gnp(n, p, derive_seed(seed, attempt - 1));
    if (is_connected(g))
      return GnpSample{std::move(g), n, p, seed, attempt};
  }
  throw sampling_exhausted(max_attempts);
}

}  // namespace walklab
