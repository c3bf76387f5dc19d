#include "walklab/mbfs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walklab {

namespace {

enum class Mark : unsigned char { neutral, live, dead_included, dead_clashed };

std::vector<int> sorted_intersection(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

// BFS layers from x, cut off at depth limit
std::vector<std::vector<int>> layers_to_depth(const Graph& g, int x, int limit) {
  std::vector<int> dist(g.n, -1);
  std::vector<std::vector<int>> layers{{x}};
  dist[x] = 0;
  std::vector<int> frontier{x};
  for (int d = 0; d < limit && !frontier.empty(); ++d) {
    std::vector<int> next;
    for (int y : frontier)
      for (int z : g.adj[y])
        if (dist[z] < 0) {
          dist[z] = d + 1;
          next.push_back(z);
        }
    std::sort(next.begin(), next.end());
    layers.push_back(next);
    frontier = std::move(layers.back());
    layers.back() = frontier;  // keep the stored copy
  }
  while (static_cast<int>(layers.size()) <= limit) layers.push_back({});
  return layers;
}

}  // namespace

MbfsTrace run_mbfs_from(const Graph& g, const std::vector<int>& roots,
                        const MbfsOptions& opt) {
  if (roots.empty()) throw std::invalid_argument("run_mbfs: no roots");
  for (int r : roots)
    if (r < 0 || r >= g.n)
      throw std::invalid_argument("run_mbfs: root out of range");
  {
    auto sorted = roots;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("run_mbfs: duplicate root");
  }

  MbfsTrace trace;
  trace.roots = {roots.front(), roots.size() > 1 ? roots[1] : roots.front()};
  trace.status.assign(g.n, MbfsStatus::unreached);
  trace.level_of.assign(g.n, -1);
  trace.parent_count.assign(g.n, 0);

  std::vector<Mark> mark(g.n, Mark::neutral);
  std::vector<int> level0 = roots;
  std::sort(level0.begin(), level0.end());
  for (int r : level0) {
    mark[r] = Mark::live;
    trace.status[r] = MbfsStatus::included;
    trace.level_of[r] = 0;
  }
  trace.levels.push_back(level0);

  std::vector<int> touch_count(g.n, 0);
  while (true) {
    // snapshot of the neutral set while the newest level is live
    std::vector<int> snapshot;
    for (int v = 0; v < g.n; ++v)
      if (mark[v] == Mark::neutral) snapshot.push_back(v);
    trace.neutral.push_back(snapshot);

    const std::vector<int>& live = trace.levels.back();
    if (snapshot.empty() || live.empty()) break;

    // step 1: reach neutral vertices from the live set
    std::vector<int> touched;
    for (int x : live)
      for (int y : g.adj[x])
        if (mark[y] == Mark::neutral) {
          if (touch_count[y] == 0) touched.push_back(y);
          ++touch_count[y];
        }
    std::sort(touched.begin(), touched.end());

    // step 2: a vertex reached from two or more live vertices is removed
    std::vector<int> next_level;
    for (int y : touched) {
      trace.parent_count[y] = touch_count[y];
      if (touch_count[y] == 1 || !opt.clash_removal) {
        next_level.push_back(y);
        mark[y] = Mark::live;
        trace.status[y] = MbfsStatus::included;
        trace.level_of[y] = static_cast<int>(trace.levels.size());
      } else {
        mark[y] = Mark::dead_clashed;
        trace.status[y] = MbfsStatus::clashed;
      }
      touch_count[y] = 0;
    }

    std::vector<Edge> between;
    for (int x : live)
      for (int y : g.adj[x])
        if (trace.level_of[y] == static_cast<int>(trace.levels.size()))
          between.emplace_back(std::min(x, y), std::max(x, y));
    std::sort(between.begin(), between.end());
    trace.level_edges.push_back(between);

    for (int x : live) mark[x] = Mark::dead_included;
    trace.levels.push_back(next_level);
  }
  return trace;
}

MbfsTrace run_mbfs(const Graph& g, std::pair<int, int> roots) {
  if (roots.first == roots.second)
    throw std::invalid_argument("run_mbfs: roots must be distinct");
  return run_mbfs_from(g, {roots.first, roots.second});
}

std::vector<int> gamma_star(const Graph& g, const MbfsTrace& trace, int x, int i) {
  if (x < 0 || x >= g.n) throw std::invalid_argument("gamma_star: vertex out of range");
  if (i < 0) throw std::invalid_argument("gamma_star: negative depth");
  int base = trace.level_of[x];
  if (base < 0)
    throw std::invalid_argument("gamma_star: vertex not in any level");
  int target = base + i;
  if (target > trace.depth()) return {};
  if (i == 0) return {x};
  if (i == 1) return sorted_intersection(g.adj[x], trace.levels[target]);
  auto layers = layers_to_depth(g, x, i);
  return sorted_intersection(layers[i], trace.levels[target]);
}

int PrunedSets::phi1_count(int x) const {
  auto it = phi1.find(x);
  return it == phi1.end() ? 0 : static_cast<int>(it->second.size());
}
int PrunedSets::psi1_count(int root) const {
  auto it = psi1.find(root);
  return it == psi1.end() ? 0 : static_cast<int>(it->second.size());
}
int PrunedSets::psi2_count(int root) const {
  auto it = psi2.find(root);
  return it == psi2.end() ? 0 : static_cast<int>(it->second.size());
}

PrunedSets prune(const Graph& g, const MbfsTrace& trace, int d) {
  if (d < 0) throw std::invalid_argument("prune: threshold must be >= 0");
  PrunedSets out;
  out.d = d;

  for (int lvl = 0; lvl <= 2 && lvl <= trace.depth(); ++lvl)
    for (int x : trace.levels[lvl])
      out.gamma_star[{x, 1}] = gamma_star(g, trace, x, 1);

  if (trace.depth() >= 2) {
    for (int y : trace.levels[2]) {
      auto parents = sorted_intersection(g.adj[y], trace.levels[1]);
      // clash removal guarantees exactly one live neighbor at discovery
      out.parent1[y] = parents.size() == 1 ? parents.front() : -1;
    }
  }

  if (trace.depth() >= 1) {
    for (int x : trace.levels[1]) {
      std::vector<int> kept;
      for (int y : out.gamma_star[{x, 1}]) {
        int gs = static_cast<int>(out.gamma_star[{y, 1}].size());
        if (gs > d) kept.push_back(y);
      }
      out.phi1[x] = kept;
    }
  }

  for (int w : {trace.roots.first, trace.roots.second}) {
    std::vector<int> psi1_w, psi2_w;
    auto it = out.gamma_star.find({w, 1});
    if (it != out.gamma_star.end()) {
      for (int x : it->second) {
        if (out.phi1_count(x) > 0) psi1_w.push_back(x);
        const auto& phi = out.phi1[x];
        psi2_w.insert(psi2_w.end(), phi.begin(), phi.end());
      }
    }
    std::sort(psi2_w.begin(), psi2_w.end());
    psi2_w.erase(std::unique(psi2_w.begin(), psi2_w.end()), psi2_w.end());
    out.psi1[w] = psi1_w;
    out.psi2[w] = psi2_w;
    if (w == trace.roots.first && trace.roots.first == trace.roots.second) break;
  }
  return out;
}

BEvent b_event_holds(const PrunedSets& pruned, std::pair<int, int> roots) {
  BEvent e;
  e.at_u = pruned.psi1_count(roots.first) > 0;
  e.at_v = pruned.psi1_count(roots.second) > 0;
  e.joint = e.at_u && e.at_v;
  return e;
}

StrongKPathResult check_strong_k_path(const Graph& g, const MbfsTrace& trace,
                                      const PrunedSets& pruned, int k) {
  if (k < 0) throw std::invalid_argument("check_strong_k_path: k must be >= 0");
  StrongKPathResult res;
  auto [u, v] = trace.roots;
  const auto& psi2_u = pruned.psi2.at(u);
  const auto& psi2_v = pruned.psi2.at(v);
  if (psi2_u.empty() || psi2_v.empty()) {
    res.holds = true;
    res.vacuous = true;
    res.witness = StrongKPathWitness{k, {}, {}};
    return res;
  }

  // per x: BFS layers to depth k intersected with the matching trace levels
  std::map<int, std::vector<std::vector<int>>> star_layers;
  auto star_of = [&](int x) -> const std::vector<std::vector<int>>& {
    auto it = star_layers.find(x);
    if (it != star_layers.end()) return it->second;
    auto layers = layers_to_depth(g, x, k);
    std::vector<std::vector<int>> star(k + 1);
    for (int i = 0; i <= k; ++i) {
      int target = trace.level_of[x] + i;
      star[i] = target <= trace.depth()
                    ? sorted_intersection(layers[i], trace.levels[target])
                    : std::vector<int>{};
    }
    return star_layers.emplace(x, std::move(star)).first->second;
  };

  StrongKPathWitness wit;
  wit.k = k;
  for (int x : psi2_u) {
    for (int y : psi2_v) {
      const auto& gx = star_of(x)[k];
      const auto& gy = star_of(y)[k];
      if (gx.empty() || gy.empty()) {
        res.failure = StrongKPathFailure{{x, y}, gx.empty(), gy.empty(), false};
        return res;
      }
      bool found = false;
      for (int xe : gx) {
        const auto& nbr = g.adj[xe];
        for (int ye : gy) {
          if (std::binary_search(nbr.begin(), nbr.end(), ye)) {
            wit.bridges[{x, y}] = {xe, ye};
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        res.failure = StrongKPathFailure{{x, y}, false, false, true};
        return res;
      }
    }
  }

  for (int side = 0; side < 2; ++side) {
    for (int x : (side == 0 ? psi2_u : psi2_v)) {
      const auto& star = star_of(x);
      std::vector<Edge> tree;
      for (int i = 0; i + 1 <= k; ++i)
        for (int y : star[i])
          for (int z : sorted_intersection(g.adj[y], star[i + 1]))
            tree.emplace_back(std::min(y, z), std::max(y, z));
      std::sort(tree.begin(), tree.end());
      wit.trees[x] = tree;
    }
  }
  res.holds = true;
  res.witness = std::move(wit);
  return res;
}

int recommended_k(int n, double p, Regime regime) {
  double np = static_cast<double>(n) * p;
  if (!(np > 1.0))
    throw std::invalid_argument("recommended_k: requires np > 1");
  double denom = 2.0 * std::log(np);
  if (regime == Regime::sparse) {
    double t = std::log(4.0 * n / 225.0) / denom;
    return static_cast<int>(std::max(0.0, std::ceil(t))) + 1;
  }
  double t = std::log(400.0 * n / 81.0) / denom;
  return static_cast<int>(std::max(0.0, std::ceil(t)));
}

KScan scan_k(const Graph& g, const MbfsTrace& trace, const PrunedSets& pruned) {
  KScan scan;
  double np = g.n > 0 ? 2.0 * static_cast<double>(g.m) / g.n : 0.0;
  scan.cap = 2;
  if (np > 1.0)
    scan.cap = static_cast<int>(std::ceil(std::log(static_cast<double>(g.n)) /
                                          (2.0 * std::log(np)))) + 2;
  for (int k = 0; k <= scan.cap; ++k) {
    auto res = check_strong_k_path(g, trace, pruned, k);
    if (res.holds) {
      scan.k = k;
      scan.vacuous = res.vacuous;
      return scan;
    }
  }
  return scan;
}

std::vector<int> s_k_of(const Graph& g, const MbfsTrace& trace, int x) {
  int k = (x >= 0 && x < g.n) ? trace.level_of[x] : -1;
  if (k < 0) throw std::invalid_argument("s_k_of: vertex not in any level");
  std::vector<char> banned(g.n, 0);
  for (int z : trace.levels[k]) {
    if (z == x) continue;
    for (int y : g.adj[z]) banned[y] = 1;
  }
  std::vector<int> out;
  for (int y : trace.neutral[k])
    if (!banned[y]) out.push_back(y);
  return out;
}

}  // namespace walklab
