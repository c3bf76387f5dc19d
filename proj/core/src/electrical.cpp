#include "walklab/electrical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace walklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// fraction-free integer determinant (Bareiss); exact for our magnitudes
__int128 bareiss_det(std::vector<std::vector<__int128>> a) {
  const int sz = static_cast<int>(a.size());
  if (sz == 0) return 1;
  __int128 sign = 1, prev = 1;
  for (int k = 0; k + 1 < sz; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < sz; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < sz; ++i) {
      for (int j = k + 1; j < sz; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[sz - 1][sz - 1];
}

// vertices reachable from start, sorted
std::vector<int> component_of(const Graph& g, int start) {
  std::vector<char> seen(g.n, 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u))
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
  }
  std::vector<int> verts;
  for (int v = 0; v < g.n; ++v)
    if (seen[v]) verts.push_back(v);
  return verts;
}

// induced subgraph on a sorted vertex list, plus the relabeling
Graph induced(const Graph& g, const std::vector<int>& verts,
              std::vector<int>& label) {
  label.assign(g.n, -1);
  for (int r = 0; r < static_cast<int>(verts.size()); ++r) label[verts[r]] = r;
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (label[u] >= 0 && label[v] >= 0)
      edges.push_back({std::min(label[u], label[v]), std::max(label[u], label[v])});
  return make_graph(static_cast<int>(verts.size()), edges);
}

__int128 laplacian_minor_det(const Graph& g, std::vector<int> dropped) {
  std::sort(dropped.begin(), dropped.end());
  std::vector<int> keep;
  for (int v = 0; v < g.n; ++v)
    if (!std::binary_search(dropped.begin(), dropped.end(), v)) keep.push_back(v);
  const int sz = static_cast<int>(keep.size());
  std::vector<std::vector<__int128>> a(sz, std::vector<__int128>(sz, 0));
  for (int r = 0; r < sz; ++r) {
    a[r][r] = g.degree(keep[r]);
    for (int c = 0; c < sz; ++c)
      if (r != c && g.has_edge(keep[r], keep[c])) a[r][c] = -1;
  }
  return bareiss_det(std::move(a));
}

}  // namespace

bool ResistanceResult::finite() const { return std::isfinite(value); }

ResistanceResult exact_resistance(const LaplacianSolver& solver, const Graph& g,
                                  int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("exact_resistance: vertex out of range");
  if (i == j) throw std::invalid_argument("exact_resistance: identical endpoints");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.n);
  b[i] = 1.0;
  b[j] = -1.0;
  SolveStats stats;
  Eigen::VectorXd x = solver.solve(b, &stats);
  ResistanceResult res;
  res.value = x[i] - x[j];
  res.method = stats.dense ? ResistanceResult::Method::dense
                           : ResistanceResult::Method::cg;
  res.iterations = stats.iterations;
  res.residual = stats.residual;
  return res;
}

ResistanceResult exact_resistance(const Graph& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("exact_resistance: vertex out of range");
  if (i == j) throw std::invalid_argument("exact_resistance: identical endpoints");
  if (!is_connected(g)) {
    // restrict to the endpoints' component; across components the value is infinite
    std::vector<int> verts = component_of(g, i);
    std::vector<int> label;
    Graph sub = induced(g, verts, label);
    if (label[j] < 0) {
      ResistanceResult res;
      res.value = kInf;
      res.method = ResistanceResult::Method::dense;
      return res;
    }
    LaplacianSolver solver(sub);
    return exact_resistance(solver, sub, label[i], label[j]);
  }
  LaplacianSolver solver(g);
  return exact_resistance(solver, g, i, j);
}

ResistanceResult spanning_tree_resistance_oracle(const Graph& g, int i, int j) {
  if (g.n > 12)
    throw std::invalid_argument("spanning_tree_resistance_oracle: refused above 12 vertices");
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("spanning_tree_resistance_oracle: vertex out of range");
  if (i == j)
    throw std::invalid_argument("spanning_tree_resistance_oracle: identical endpoints");
  if (!is_connected(g)) {
    std::vector<int> verts = component_of(g, i);
    std::vector<int> label;
    Graph sub = induced(g, verts, label);
    if (label[j] < 0) {
      ResistanceResult res;
      res.method = ResistanceResult::Method::spanning_tree;
      res.value = kInf;
      return res;
    }
    return spanning_tree_resistance_oracle(sub, label[i], label[j]);
  }
  __int128 trees = laplacian_minor_det(g, {i});
  __int128 two_forests = laplacian_minor_det(g, {i, j});
  ResistanceResult res;
  res.method = ResistanceResult::Method::spanning_tree;
  res.value = trees == 0 ? kInf
                         : static_cast<double>(static_cast<long double>(two_forests) /
                                               static_cast<long double>(trees));
  return res;
}

double UnitFlow::theta(int x, int y) const {
  auto it = values.find(x < y ? Edge{x, y} : Edge{y, x});
  if (it == values.end()) return 0.0;
  return x < y ? it->second : -it->second;
}

void UnitFlow::add(int x, int y, double amount) {
  if (x == y) throw std::invalid_argument("UnitFlow::add: loop edge");
  if (x < y)
    values[{x, y}] += amount;
  else
    values[{y, x}] -= amount;
}

double flow_energy(const UnitFlow& flow) {
  double e = 0.0;
  for (const auto& [edge, theta] : flow.values) e += theta * theta;
  return e;
}

double FlowValidation::max_violation() const {
  if (nonedge_support > 0) return kInf;
  return std::max({max_node_imbalance, source_strength_error, sink_strength_error});
}

FlowValidation validate_flow(const Graph& g, const UnitFlow& flow) {
  FlowValidation report;
  std::vector<double> net(g.n, 0.0);
  for (const auto& [edge, theta] : flow.values) {
    auto [u, v] = edge;
    if (!g.has_edge(u, v)) {
      ++report.nonedge_support;
      continue;
    }
    net[u] -= theta;
    net[v] += theta;
  }
  for (int v = 0; v < g.n; ++v) {
    if (v == flow.source)
      report.source_strength_error = std::abs(-net[v] - 1.0);
    else if (v == flow.sink)
      report.sink_strength_error = std::abs(net[v] - 1.0);
    else
      report.max_node_imbalance = std::max(report.max_node_imbalance, std::abs(net[v]));
  }
  return report;
}

UnitFlow build_lemma_flow(const Graph&, const MbfsTrace& trace,
                          const PrunedSets& pruned,
                          const StrongKPathWitness& witness) {
  auto [u, v] = trace.roots;
  const double psi_u = pruned.psi1_count(u);
  const double psi_v = pruned.psi1_count(v);
  if (psi_u < 1 || psi_v < 1)
    throw std::invalid_argument("build_lemma_flow: needs nonempty Psi_1 on both roots");
  if (witness.bridges.empty())
    throw std::invalid_argument("build_lemma_flow: witness carries no bridge edges");

  UnitFlow flow;
  flow.source = u;
  flow.sink = v;

  for (int a : pruned.psi1.at(u)) {
    flow.add(u, a, 1.0 / psi_u);
    const auto& phi = pruned.phi1.at(a);
    for (int x : phi) flow.add(a, x, 1.0 / (psi_u * phi.size()));
  }
  for (int b : pruned.psi1.at(v)) {
    flow.add(b, v, 1.0 / psi_v);
    const auto& phi = pruned.phi1.at(b);
    for (int y : phi) flow.add(y, b, 1.0 / (psi_v * phi.size()));
  }

  // per-pair bridge amounts, and per-tree totals entering each leaf endpoint
  std::map<int, std::map<int, double>> leaf_inflow;  // tree root -> endpoint -> sum
  for (const auto& [pair, bridge] : witness.bridges) {
    auto [x, y] = pair;
    int ax = pruned.parent1.at(x);
    int by = pruned.parent1.at(y);
    double amount = 1.0 / (psi_u * pruned.phi1_count(ax) * psi_v * pruned.phi1_count(by));
    flow.add(bridge.first, bridge.second, amount);
    leaf_inflow[x][bridge.first] += amount;
    leaf_inflow[y][bridge.second] += amount;
  }

  // layered trees: each edge carries the bridge total of the subtree below it
  const auto& psi2_u = pruned.psi2.at(u);
  auto is_u_side = [&](int root) {
    return std::binary_search(psi2_u.begin(), psi2_u.end(), root);
  };
  for (const auto& [root, edges] : witness.trees) {
    if (edges.empty()) continue;
    std::map<int, std::vector<int>> adj;
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::map<int, int> parent;
    std::vector<int> order;
    std::deque<int> queue{root};
    parent[root] = -1;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      order.push_back(x);
      for (int y : adj[x])
        if (!parent.count(y)) {
          parent[y] = x;
          queue.push_back(y);
        }
    }
    std::map<int, double> out;
    const auto& leaves = leaf_inflow[root];
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int x = *it;
      auto leaf = leaves.find(x);
      if (leaf != leaves.end()) out[x] += leaf->second;
      if (parent[x] >= 0) {
        double carried = out[x];
        if (carried != 0.0) {
          if (is_u_side(root))
            flow.add(parent[x], x, carried);  // away from the source root
          else
            flow.add(x, parent[x], carried);  // toward the sink root
        }
        out[parent[x]] += carried;
      }
    }
  }
  return flow;
}

double resistance_upper_bound_formula(const PrunedSets& pruned, int k) {
  if (k < 0) throw std::invalid_argument("resistance_upper_bound_formula: k must be >= 0");
  if (pruned.psi1.size() < 2) return kInf;
  double total = 0.0;
  for (const auto& [root, psi] : pruned.psi1) {
    (void)root;
    const double s = static_cast<double>(psi.size());
    if (s < 1) return kInf;
    total += 1.0 / s;
    for (int a : psi) {
      int phi = pruned.phi1_count(a);
      if (phi < 1) return kInf;  // cannot happen for members of Psi_1
      total += (k + 2) / (s * s * phi);
    }
  }
  return total;
}

double resistance_lower_bound(const Graph& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("resistance_lower_bound: vertex out of range");
  if (i == j) throw std::invalid_argument("resistance_lower_bound: identical endpoints");
  return 1.0 / (g.degree(i) + 1.0) + 1.0 / (g.degree(j) + 1.0);
}

double distance_resistance_bound(const Graph& g, int i, int j) {
  auto d = distance(g, i, j);
  return d ? static_cast<double>(*d) : kInf;
}

}  // namespace walklab
