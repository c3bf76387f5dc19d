#pragma once

// shared fixtures: standard graph builders, an exhaustive catalogue of small
// connected graphs (one labeled representative per isomorphism class), a
// reference all-pairs distance routine, and a generator for layered
// double-tree instances whose two-root search trace is known by construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/rng.hpp"

namespace testsupport {

using walklab::Edge;
using walklab::Graph;

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return walklab::make_graph(n, e);
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return walklab::make_graph(n, e);
}

inline Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.push_back({u, v});
  return walklab::make_graph(n, e);
}

inline Graph star_graph(int n) {  // center 0
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.push_back({0, i});
  return walklab::make_graph(n, e);
}

namespace detail {

inline int pair_slot(int n, int u, int v) {  // u < v
  int idx = 0;
  for (int a = 0; a < u; ++a) idx += n - 1 - a;
  return idx + (v - u - 1);
}

inline bool mask_connected(int n, std::uint32_t mask) {
  if (n == 1) return true;
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  int slot = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++slot)
      if (mask >> slot & 1u) comp[find(u)] = find(v);
  for (int x = 1; x < n; ++x)
    if (find(x) != find(0)) return false;
  return true;
}

}  // namespace detail

// all connected graphs on exactly n labeled vertices, deduplicated up to
// isomorphism by taking the minimum edge bitmask over all vertex relabelings
inline const std::vector<Graph>& connected_catalogue(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("catalogue supports 1..6");
  static std::vector<std::vector<Graph>> cache(7);
  auto& slot = cache[n];
  if (!slot.empty()) return slot;

  const int nbits = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> bit_edge(nbits);
  {
    int s = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v, ++s) bit_edge[s] = {u, v};
  }
  // per-permutation bit remap tables
  std::vector<std::vector<int>> remaps;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> r(nbits);
    for (int s = 0; s < nbits; ++s) {
      auto [u, v] = bit_edge[s];
      int a = perm[u], b = perm[v];
      if (a > b) std::swap(a, b);
      r[s] = detail::pair_slot(n, a, b);
    }
    remaps.push_back(std::move(r));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::set<std::uint32_t> canon;
  for (std::uint32_t mask = 0; mask < (1u << nbits); ++mask) {
    if (!detail::mask_connected(n, mask)) continue;
    std::uint32_t best = ~0u;
    for (const auto& r : remaps) {
      std::uint32_t m = 0;
      for (int s = 0; s < nbits; ++s)
        if (mask >> s & 1u) m |= 1u << r[s];
      best = std::min(best, m);
    }
    canon.insert(best);
  }
  for (std::uint32_t mask : canon) {
    std::vector<Edge> e;
    for (int s = 0; s < nbits; ++s)
      if (mask >> s & 1u) e.push_back({bit_edge[s].first, bit_edge[s].second});
    slot.push_back(walklab::make_graph(n, e));
  }
  return slot;
}

// reference all-pairs distances; -1 where unreachable
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
  const int n = g.n;
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (int u = 0; u < n; ++u)
    for (int v : g.adj[u]) d[u][v] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (auto& x : row)
      if (x >= inf) x = -1;
  return d;
}

// Layered double tree: roots 0 and 1, `psi` first-level children per root,
// `phi` second-level children per first-level vertex, then `k` further layers
// with `branch` children each, and bridge edges joining opposite final-layer
// leaves. Every second-level pair (x, y) across the two sides gets at least
// one bridge between descendants of x and of y, so the depth-k witness check
// succeeds non-vacuously whenever branch > d.
struct LayeredParams {
  int psi = 2;
  int phi = 2;
  int k = 1;
  int branch = 2;
  int d = 1;
  double extra_bridge_p = 0.0;
  std::uint64_t seed = 0;
};

struct LayeredInstance {
  Graph g;
  int k = 0;
  int d = 0;
  std::vector<std::vector<int>> levels;       // merged sides, index = level
  std::vector<int> x_u, x_v;                  // second-level vertices per side
  std::map<int, std::vector<int>> leaves_of;  // final-layer descendants per x
};

inline LayeredInstance layered_double_tree(const LayeredParams& P) {
  if (P.psi < 1 || P.phi < 1 || P.k < 0 || P.branch < 1)
    throw std::invalid_argument("layered_double_tree: bad parameters");
  LayeredInstance inst;
  inst.k = P.k;
  inst.d = P.d;
  // grow to at least level 3 so the second-level vertices always have onward
  // neighbors and survive pruning, even when the bridge layer is level 2
  const int depth = std::max(P.k + 2, 3);
  const int bridge_level = P.k + 2;
  std::vector<Edge> edges;
  int next = 2;
  inst.levels.assign(depth + 1, {});
  inst.levels[0] = {0, 1};

  auto grow_side = [&](int root) {
    std::vector<std::vector<int>> side(depth + 1);
    side[0] = {root};
    for (int lvl = 1; lvl <= depth; ++lvl) {
      int fan = lvl == 1 ? P.psi : lvl == 2 ? P.phi : P.branch;
      for (int parent : side[lvl - 1])
        for (int c = 0; c < fan; ++c) {
          int w = next++;
          edges.push_back({parent, w});
          side[lvl].push_back(w);
          inst.levels[lvl].push_back(w);
        }
    }
    return side;
  };

  auto side_u = grow_side(0);
  auto side_v = grow_side(1);
  inst.x_u = side_u[2];
  inst.x_v = side_v[2];

  // bridge-layer descendants, contiguous per second-level vertex because
  // children are generated in parent order
  int per_x = 1;
  for (int l = 3; l <= bridge_level; ++l) per_x *= P.branch;
  auto slice = [&](const std::vector<int>& layer, std::size_t ix) {
    return std::vector<int>(layer.begin() + ix * per_x,
                            layer.begin() + (ix + 1) * per_x);
  };
  for (std::size_t ix = 0; ix < inst.x_u.size(); ++ix)
    inst.leaves_of[inst.x_u[ix]] = slice(side_u[bridge_level], ix);
  for (std::size_t ix = 0; ix < inst.x_v.size(); ++ix)
    inst.leaves_of[inst.x_v[ix]] = slice(side_v[bridge_level], ix);

  std::set<std::pair<int, int>> bridges;
  for (int x : inst.x_u)
    for (int y : inst.x_v)
      bridges.insert({inst.leaves_of[x][0], inst.leaves_of[y][0]});
  walklab::CounterRng rng{walklab::derive_seed(P.seed, 0x6c617972), 0};
  if (P.extra_bridge_p > 0.0)
    for (int lu : side_u[bridge_level])
      for (int lv : side_v[bridge_level])
        if (rng.next_uniform01() < P.extra_bridge_p) bridges.insert({lu, lv});
  for (auto [a, b] : bridges) edges.push_back({a, b});

  inst.g = walklab::make_graph(next, edges);
  return inst;
}

}  // namespace testsupport
