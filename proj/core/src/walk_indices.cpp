#include "walklab/walk_indices.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walklab/electrical.hpp"
#include "walklab/rng.hpp"

namespace walklab {

namespace {

void require_walkable(const Graph& g, const char* who) {
  if (g.n < 2) throw std::invalid_argument(std::string(who) + ": needs n >= 2");
  if (g.m == 0) throw std::invalid_argument(std::string(who) + ": needs at least one edge");
  if (!is_connected(g)) throw std::invalid_argument(std::string(who) + ": graph is disconnected");
}

// grounded first-step system: (L restricted to V \ {j}) h = degree vector
Eigen::VectorXd grounded_hitting(const Graph& g, int j) {
  const int n = g.n;
  std::vector<int> col(n, -1);
  int sz = 0;
  for (int v = 0; v < n; ++v)
    if (v != j) col[v] = sz++;

  Eigen::VectorXd rhs(sz);
  for (int v = 0; v < n; ++v)
    if (v != j) rhs[col[v]] = g.degree(v);

  if (n <= 500) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(sz, sz);
    for (int v = 0; v < n; ++v) {
      if (v == j) continue;
      a(col[v], col[v]) = g.degree(v);
      for (int w : g.adj[v])
        if (w != j) a(col[v], col[w]) = -1.0;
    }
    Eigen::VectorXd h = a.ldlt().solve(rhs);
    Eigen::VectorXd full(n);
    for (int v = 0; v < n; ++v) full[v] = v == j ? 0.0 : h[col[v]];
    return full;
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n + 2 * g.m);
  for (int v = 0; v < n; ++v) {
    if (v == j) continue;
    trip.emplace_back(col[v], col[v], static_cast<double>(g.degree(v)));
    for (int w : g.adj[v])
      if (w != j) trip.emplace_back(col[v], col[w], -1.0);
  }
  Eigen::SparseMatrix<double> a(sz, sz);
  a.setFromTriplets(trip.begin(), trip.end());

  // Jacobi CG on the grounded system
  Eigen::VectorXd invd(sz);
  for (int v = 0; v < n; ++v)
    if (v != j) invd[col[v]] = 1.0 / g.degree(v);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sz);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = invd.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const double bnorm = rhs.norm();
  for (int it = 0; it < 10 * n && r.norm() > 1e-10 * bnorm; ++it) {
    Eigen::VectorXd q = a * p;
    double pq = p.dot(q);
    if (pq <= 0) break;
    double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    z = invd.asDiagonal() * r;
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  Eigen::VectorXd full(n);
  for (int v = 0; v < n; ++v) full[v] = v == j ? 0.0 : x[col[v]];
  return full;
}

double pair_resistance(const LaplacianSolver& solver, int i, int j,
                       Eigen::VectorXd* out_x = nullptr, SolveStats* stats = nullptr) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(solver.n());
  b[i] = 1.0;
  b[j] = -1.0;
  Eigen::VectorXd x = solver.solve(b, stats);
  double r = x[i] - x[j];
  if (out_x) *out_x = std::move(x);
  return r;
}

}  // namespace

std::vector<double> stationary(const Graph& g) {
  if (g.m == 0) throw std::invalid_argument("stationary: needs at least one edge");
  std::vector<double> pi(g.n);
  const double total = 2.0 * static_cast<double>(g.m);
  for (int v = 0; v < g.n; ++v) pi[v] = g.degree(v) / total;
  return pi;
}

std::vector<double> hitting_column(const Graph& g, int j) {
  require_walkable(g, "hitting_column");
  if (j < 0 || j >= g.n) throw std::invalid_argument("hitting_column: target out of range");
  Eigen::VectorXd h = grounded_hitting(g, j);
  return {h.data(), h.data() + g.n};
}

double hitting_time(const Graph& g, int i, int j) {
  require_walkable(g, "hitting_time");
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("hitting_time: vertex out of range");
  if (i == j) return 0.0;
  return hitting_column(g, j)[i];
}

double hitting_time_tetali(const Graph& g, int i, int j,
                           const std::map<Edge, double>& resistance) {
  require_walkable(g, "hitting_time_tetali");
  auto lookup = [&](int a, int b) -> double {
    if (a == b) return 0.0;
    auto it = resistance.find(a < b ? Edge{a, b} : Edge{b, a});
    if (it == resistance.end())
      throw std::invalid_argument("hitting_time_tetali: missing resistance entry");
    return it->second;
  };
  double sum = 0.0;
  for (int u = 0; u < g.n; ++u)
    sum += g.degree(u) * (lookup(j, u) - lookup(u, i));
  return static_cast<double>(g.m) * lookup(i, j) + 0.5 * sum;
}

double commute_time(const Graph& g, int i, int j) {
  require_walkable(g, "commute_time");
  double kappa = 2.0 * static_cast<double>(g.m) * exact_resistance(g, i, j).value;
  double round_trip = hitting_time(g, i, j) + hitting_time(g, j, i);
  if (std::abs(kappa - round_trip) > 1e-8 * std::max(1.0, std::abs(kappa)))
    throw std::runtime_error("commute_time: resistance and hitting routes disagree");
  return kappa;
}

double kirchhoff_index(const Graph& g) {
  require_walkable(g, "kirchhoff_index");
  LaplacianSolver solver(g);
  return static_cast<double>(g.n) * solver.pinv_diagonal().sum();
}

double kirchhoff_index_spectral(const Graph& g) {
  require_walkable(g, "kirchhoff_index_spectral");
  if (g.n > 300)
    throw std::invalid_argument("kirchhoff_index_spectral: dense route capped at n = 300");
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int u = 0; u < g.n; ++u) {
    lap(u, u) = g.degree(u);
    for (int v : g.adj[u]) lap(u, v) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  int skipped = 0;
  for (int idx = 0; idx < g.n; ++idx) {
    double lambda = eig.eigenvalues()[idx];
    if (lambda < 1e-9) {
      ++skipped;
      continue;
    }
    sum += 1.0 / lambda;
  }
  if (skipped != 1)
    throw std::runtime_error("kirchhoff_index_spectral: unexpected kernel dimension");
  return static_cast<double>(g.n) * sum;
}

double cover_cost(const Graph& g, int i) {
  require_walkable(g, "cover_cost");
  if (i < 0 || i >= g.n) throw std::invalid_argument("cover_cost: vertex out of range");
  LaplacianSolver solver(g);
  PinvEngine e = build_pinv_engine(solver, g);
  const double m2 = 2.0 * static_cast<double>(g.m);
  return (m2 * e.trace + g.n * e.w[i] - e.w.sum()) / (g.n - 1.0);
}

double uniform_cover_cost(const Graph& g) {
  require_walkable(g, "uniform_cover_cost");
  double total = 0.0;
  for (int j = 0; j < g.n; ++j) {
    Eigen::VectorXd h = grounded_hitting(g, j);
    total += h.sum();
  }
  double via_columns = total / (static_cast<double>(g.n) * (g.n - 1.0));
  double via_kirchhoff = 2.0 * static_cast<double>(g.m) * kirchhoff_index(g) /
                         (static_cast<double>(g.n) * (g.n - 1.0));
  if (std::abs(via_columns - via_kirchhoff) >
      1e-8 * std::max(1.0, std::abs(via_kirchhoff)))
    throw std::runtime_error("uniform_cover_cost: column and index routes disagree");
  return via_columns;
}

double random_target(const Graph& g, int j) {
  require_walkable(g, "random_target");
  if (j < 0 || j >= g.n) throw std::invalid_argument("random_target: target out of range");
  Eigen::VectorXd h = grounded_hitting(g, j);
  auto pi = stationary(g);
  double sum = 0.0;
  for (int v = 0; v < g.n; ++v) sum += pi[v] * h[v];
  return sum;
}

double kemeny(const Graph& g) {
  require_walkable(g, "kemeny");
  auto pi = stationary(g);
  double from0 = 0.0, from1 = 0.0;
  for (int j = 0; j < g.n; ++j) {
    Eigen::VectorXd h = grounded_hitting(g, j);
    from0 += pi[j] * h[0];
    from1 += pi[j] * h[1];
  }
  if (std::abs(from0 - from1) > 1e-9 * std::max(1.0, std::abs(from0)))
    throw std::runtime_error("kemeny: value depends on the start vertex");
  return from0;
}

double mean_hitting(const Graph& g) {
  require_walkable(g, "mean_hitting");
  auto pi = stationary(g);
  double total = 0.0;
  for (int j = 0; j < g.n; ++j) {
    Eigen::VectorXd h = grounded_hitting(g, j);
    double target_mix = 0.0;
    for (int v = 0; v < g.n; ++v) target_mix += pi[v] * h[v];
    total += pi[j] * target_mix;
  }
  return total;
}

PairIndices pair_indices(const LaplacianSolver& solver, const PinvEngine& engine,
                         int i, int j) {
  PairIndices out;
  Eigen::VectorXd x;
  SolveStats stats;
  out.resistance = pair_resistance(solver, i, j, &x, &stats);
  out.iterations = stats.iterations;
  out.residual = stats.residual;
  const double m = static_cast<double>(engine.m);
  out.hitting_ij = m * out.resistance + m * (engine.diag[j] - engine.diag[i]) +
                   engine.degrees.dot(x);
  out.commute = 2.0 * m * out.resistance;
  out.hitting_ji = out.commute - out.hitting_ij;
  return out;
}

namespace {

IndexReport report_from_engine(const Graph& g, const LaplacianSolver& solver,
                               const std::vector<Edge>& pairs) {
  PinvEngine e = build_pinv_engine(solver, g);
  IndexReport rep;
  rep.n = g.n;
  rep.m = g.m;
  rep.pi = stationary(g);
  const double m2 = 2.0 * static_cast<double>(g.m);

  rep.kirchhoff = g.n * e.trace;
  double w_sum = e.w.sum();
  double pi_w = 0.0, pi_diag = 0.0;
  for (int v = 0; v < g.n; ++v) {
    pi_w += rep.pi[v] * e.w[v];
    pi_diag += rep.pi[v] * e.diag[v];
  }
  rep.cover_cost.resize(g.n);
  rep.random_target.resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    rep.cover_cost[v] = (m2 * e.trace + g.n * e.w[v] - w_sum) / (g.n - 1.0);
    rep.random_target[v] = m2 * e.diag[v] - 2.0 * e.w[v] + pi_w;
  }
  rep.uniform_cover_cost = m2 * rep.kirchhoff / (static_cast<double>(g.n) * (g.n - 1.0));
  rep.kemeny = m2 * pi_diag - pi_w;
  rep.mean_hitting = rep.kemeny;  // stationary average of a start-free constant

  for (auto [i, j] : pairs) {
    PairIndices pi_ij = pair_indices(solver, e, i, j);
    rep.resistance[{std::min(i, j), std::max(i, j)}] = pi_ij.resistance;
    rep.hitting[{i, j}] = pi_ij.hitting_ij;
    rep.hitting[{j, i}] = pi_ij.hitting_ji;
    rep.kappa[{std::min(i, j), std::max(i, j)}] = pi_ij.commute;
  }
  return rep;
}

}  // namespace

IndexReport full_report(const Graph& g, std::size_t pair_budget, std::uint64_t seed) {
  require_walkable(g, "full_report");
  LaplacianSolver solver(g);
  std::vector<Edge> pairs;
  const std::size_t all = static_cast<std::size_t>(g.n) * (g.n - 1) / 2;
  if (all <= pair_budget) {
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j) pairs.emplace_back(i, j);
  } else {
    CounterRng rng{derive_seed(seed, 0x70616972), 0};  // "pair"
    for (std::size_t t = 0; t < pair_budget; ++t) {
      int i = static_cast<int>(rng.next_below(g.n));
      int j = static_cast<int>(rng.next_below(g.n - 1));
      if (j >= i) ++j;
      pairs.emplace_back(i, j);
    }
  }
  return report_from_engine(g, solver, pairs);
}

IndexReport full_report_for_pairs(const Graph& g, const std::vector<Edge>& pairs) {
  require_walkable(g, "full_report");
  for (auto [i, j] : pairs)
    if (i < 0 || j < 0 || i >= g.n || j >= g.n || i == j)
      throw std::invalid_argument("full_report: bad pair");
  LaplacianSolver solver(g);
  return report_from_engine(g, solver, pairs);
}

}  // namespace walklab
