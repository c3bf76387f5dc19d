#include "walklab/disjoint_paths.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace walklab {

namespace {

std::vector<char> ball_mask(const Graph& g, int i, int j) {
  std::vector<char> in_ball(g.n, 0);
  in_ball[i] = in_ball[j] = 1;
  for (int v : g.adj[i]) in_ball[v] = 1;
  for (int v : g.adj[j]) in_ball[v] = 1;
  return in_ball;
}

std::vector<int> tree_path(const std::vector<Edge>& edges, int from, int to) {
  if (from == to) return {from};
  std::map<int, std::vector<int>> adj;
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<int, int> parent;
  parent[from] = from;
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == to) break;
    for (int y : adj[x])
      if (!parent.count(y)) {
        parent[y] = x;
        queue.push_back(y);
      }
  }
  if (!parent.count(to))
    throw std::runtime_error("paths2_construct: bridge endpoint not in its tree");
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Dinic {
  struct Arc {
    int to;
    int cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;
  std::vector<int> level, cursor;

  explicit Dinic(int nodes) : out(nodes), level(nodes), cursor(nodes) {}

  void add_arc(int a, int b, int cap) {
    out[a].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({b, cap});
    out[b].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({a, 0});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::deque<int> queue{s};
    level[s] = 0;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int id : out[x]) {
        const Arc& a = arcs[id];
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[x] + 1;
          queue.push_back(a.to);
        }
      }
    }
    return level[t] >= 0;
  }

  int dfs(int x, int t, int limit) {
    if (x == t || limit == 0) return limit;
    for (int& c = cursor[x]; c < static_cast<int>(out[x].size()); ++c) {
      int id = out[x][c];
      Arc& a = arcs[id];
      if (a.cap > 0 && level[a.to] == level[x] + 1) {
        int pushed = dfs(a.to, t, std::min(limit, a.cap));
        if (pushed > 0) {
          a.cap -= pushed;
          arcs[id ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  int max_flow(int s, int t) {
    int total = 0;
    while (bfs(s, t)) {
      std::fill(cursor.begin(), cursor.end(), 0);
      while (int pushed = dfs(s, t, 1 << 30)) total += pushed;
    }
    return total;
  }
};

}  // namespace

std::vector<std::vector<int>> paths2_construct(const Graph& g,
                                               const MbfsTrace& trace,
                                               const PrunedSets& pruned,
                                               const StrongKPathWitness& witness) {
  auto [i, j] = trace.roots;
  auto side_u = pruned.psi2.at(i);
  auto side_v = pruned.psi2.at(j);
  if (side_u.empty() || side_v.empty()) return {};

  const int k = witness.k;
  const std::size_t count = std::min(side_u.size(), side_v.size());
  std::vector<std::vector<int>> paths;
  paths.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    int x = side_u[r];
    int y = side_v[r];
    auto bridge_it = witness.bridges.find({x, y});
    if (bridge_it == witness.bridges.end())
      throw std::invalid_argument("paths2_construct: witness misses a matched pair");
    auto [xe, ye] = bridge_it->second;

    std::vector<int> up = k == 0 ? std::vector<int>{x}
                                 : tree_path(witness.trees.at(x), x, xe);
    std::vector<int> down = k == 0 ? std::vector<int>{y}
                                   : tree_path(witness.trees.at(y), y, ye);
    std::vector<int> path;
    path.push_back(i);
    path.push_back(pruned.parent1.at(x));
    path.insert(path.end(), up.begin(), up.end());
    for (auto it = down.rbegin(); it != down.rend(); ++it) path.push_back(*it);
    path.push_back(pruned.parent1.at(y));
    path.push_back(j);

    if (static_cast<int>(path.size()) != 2 * k + 6)
      throw std::runtime_error("paths2_construct: path length off the 2k+5 design");
    for (std::size_t s = 0; s + 1 < path.size(); ++s)
      if (!g.has_edge(path[s], path[s + 1]))
        throw std::runtime_error("paths2_construct: constructed step is not an edge");
    paths.push_back(std::move(path));
  }

  // pairwise disjointness outside the two balls
  auto in_ball = ball_mask(g, i, j);
  std::set<int> used;
  for (const auto& path : paths)
    for (int v : path) {
      if (in_ball[v]) continue;
      if (!used.insert(v).second)
        throw std::runtime_error("paths2_construct: paths collide outside the balls");
    }
  return paths;
}

int paths2_maxflow_upper(const Graph& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("paths2_maxflow_upper: vertex out of range");
  if (i == j) throw std::invalid_argument("paths2_maxflow_upper: identical endpoints");
  auto in_ball = ball_mask(g, i, j);
  // a route staying inside the two balls exists exactly when dist(i,j) <= 3;
  // it would carry unbounded flow past the vertex capacities, so edges get
  // unit capacity in that case (edge-distinct route count) and are otherwise
  // free, leaving the outside-ball vertex splits as the only bottleneck
  auto dist_ij = distance(g, i, j);
  int edge_cap = dist_ij && *dist_ij < 4 ? 1 : g.n;
  // split vertices outside the balls: node 2v enters, 2v+1 leaves
  Dinic net(2 * g.n);
  auto enter = [&](int v) { return 2 * v; };
  auto leave = [&](int v) { return in_ball[v] ? 2 * v : 2 * v + 1; };
  for (int v = 0; v < g.n; ++v)
    if (!in_ball[v]) net.add_arc(enter(v), leave(v), 1);
  for (auto [u, v] : g.edges()) {
    net.add_arc(leave(u), enter(v), edge_cap);
    net.add_arc(leave(v), enter(u), edge_cap);
  }
  return net.max_flow(leave(i), enter(j));
}

Gamma2Bound paths2_gamma2_upper(const Graph& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("paths2_gamma2_upper: vertex out of range");
  if (i == j) throw std::invalid_argument("paths2_gamma2_upper: identical endpoints");
  Gamma2Bound bound;
  auto gi = neighborhood(g, i, 2).gamma_k;
  auto gj = neighborhood(g, j, 2).gamma_k;
  bound.value = static_cast<int>(std::min(gi.size(), gj.size()));
  auto d = distance(g, i, j);
  bound.valid = !d || *d >= 4;
  return bound;
}

Paths2Exact paths2_exact_bruteforce(const Graph& g, int i, int j, int l,
                                    std::size_t max_paths) {
  if (g.n > 12)
    throw std::invalid_argument("paths2_exact_bruteforce: refused above 12 vertices");
  if (i < 0 || j < 0 || i >= g.n || j >= g.n || i == j)
    throw std::invalid_argument("paths2_exact_bruteforce: bad endpoints");
  if (l < 1) throw std::invalid_argument("paths2_exact_bruteforce: length cap must be >= 1");

  auto in_ball = ball_mask(g, i, j);
  Paths2Exact res;
  res.degenerate = true;
  for (int v = 0; v < g.n; ++v)
    if (!in_ball[v]) res.degenerate = false;

  std::vector<std::uint32_t> masks;  // outside-ball vertices used by each path
  std::vector<int> path{i};
  std::vector<char> on_path(g.n, 0);
  on_path[i] = 1;
  std::function<void(int)> extend = [&](int x) {
    if (masks.size() > max_paths)
      throw std::invalid_argument("paths2_exact_bruteforce: too many paths to enumerate");
    for (int y : g.adj[x]) {
      if (y == j) {
        if (static_cast<int>(path.size()) <= l) {
          std::uint32_t mask = 0;
          for (int v : path)
            if (!in_ball[v]) mask |= 1u << v;
          masks.push_back(mask);
        }
        continue;
      }
      if (on_path[y] || static_cast<int>(path.size()) >= l) continue;
      on_path[y] = 1;
      path.push_back(y);
      extend(y);
      path.pop_back();
      on_path[y] = 0;
    }
  };
  extend(i);
  res.paths_seen = masks.size();

  // free paths touch nothing outside the balls and always pack
  int free_paths = 0;
  std::vector<std::uint32_t> packable;
  for (std::uint32_t m : masks)
    if (m == 0)
      ++free_paths;
    else
      packable.push_back(m);
  std::sort(packable.begin(), packable.end());
  packable.erase(std::unique(packable.begin(), packable.end()), packable.end());

  int best = 0;
  std::function<void(std::size_t, std::uint32_t, int)> pack =
      [&](std::size_t idx, std::uint32_t used, int taken) {
        best = std::max(best, taken);
        if (idx >= packable.size()) return;
        if (taken + static_cast<int>(packable.size() - idx) <= best) return;
        if ((packable[idx] & used) == 0)
          pack(idx + 1, used | packable[idx], taken + 1);
        pack(idx + 1, used, taken);
      };
  pack(0, 0, 0);
  res.value = free_paths + best;
  return res;
}

Paths2Bracket paths2_bracket(const Graph& g, int i, int j, int d, int k,
                             bool with_exact, int l) {
  Paths2Bracket bracket;
  bracket.i = i;
  bracket.j = j;
  auto trace = run_mbfs(g, {i, j});
  auto pruned = prune(g, trace, d);
  int k_used = k;
  if (k_used < 0) {
    KScan scan = scan_k(g, trace, pruned);
    k_used = scan.k >= 0 ? scan.k : 0;
  }
  bracket.k = k_used;
  bracket.l = l >= 0 ? l : 2 * k_used + 5;
  auto check = check_strong_k_path(g, trace, pruned, k_used);
  if (check.holds && check.witness) {
    bracket.paths = paths2_construct(g, trace, pruned, *check.witness);
    bracket.lower = static_cast<int>(bracket.paths.size());
  }
  bracket.upper_menger = paths2_maxflow_upper(g, i, j);
  bracket.upper_gamma2 = paths2_gamma2_upper(g, i, j);
  if (with_exact) bracket.exact = paths2_exact_bruteforce(g, i, j, bracket.l).value;
  return bracket;
}

}  // namespace walklab
