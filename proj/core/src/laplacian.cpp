#include "walklab/laplacian.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace walklab {

namespace {

void project_mean_zero(Eigen::MatrixXd& x) {
  Eigen::RowVectorXd means = x.colwise().mean();
  x.rowwise() -= means;
}

}  // namespace

LaplacianSolver::LaplacianSolver(const Graph& g, int dense_cutoff, double tol,
                                 int max_iter_factor)
    : n_(g.n), dense_(g.n <= dense_cutoff), tol_(tol),
      max_iter_(max_iter_factor * g.n) {
  if (g.n < 1) throw std::invalid_argument("LaplacianSolver: empty graph");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.n + 2 * g.m);
  for (int u = 0; u < g.n; ++u) {
    trip.emplace_back(u, u, static_cast<double>(g.degree(u)));
    for (int v : g.adj[u]) trip.emplace_back(u, v, -1.0);
  }
  lap_.resize(g.n, g.n);
  lap_.setFromTriplets(trip.begin(), trip.end());
  inv_deg_.resize(g.n);
  for (int u = 0; u < g.n; ++u)
    inv_deg_[u] = g.degree(u) > 0 ? 1.0 / g.degree(u) : 1.0;
  if (dense_) {
    Eigen::MatrixXd a = Eigen::MatrixXd(lap_);
    a.array() += 1.0 / n_;  // rank fix: J/n shifts the null space to eigenvalue 1
    ldlt_.compute(a);
  }
}

Eigen::MatrixXd LaplacianSolver::solve_block(const Eigen::MatrixXd& B,
                                             SolveStats* stats) const {
  Eigen::MatrixXd rhs = B;
  project_mean_zero(rhs);
  if (dense_) {
    Eigen::MatrixXd x = ldlt_.solve(rhs);
    project_mean_zero(x);
    if (stats) {
      double bn = rhs.norm();
      stats->iterations = 1;
      stats->residual = bn > 0 ? (lap_ * x - rhs).norm() / bn : 0.0;
      stats->dense = true;
    }
    return x;
  }

  const auto cols = rhs.cols();
  Eigen::VectorXd bnorm = rhs.colwise().norm();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n_, cols);
  Eigen::MatrixXd r = rhs;
  Eigen::MatrixXd z = inv_deg_.asDiagonal() * r;
  Eigen::MatrixXd p = z;
  Eigen::VectorXd rz = (r.array() * z.array()).colwise().sum();
  Eigen::Array<bool, Eigen::Dynamic, 1> active(cols);
  for (Eigen::Index c = 0; c < cols; ++c) active[c] = bnorm[c] > 0;

  int it = 0;
  for (; it < max_iter_; ++it) {
    bool any = false;
    for (Eigen::Index c = 0; c < cols; ++c) any = any || active[c];
    if (!any) break;

    Eigen::MatrixXd q = lap_ * p;
    Eigen::VectorXd pq = (p.array() * q.array()).colwise().sum();
    Eigen::VectorXd alpha(cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      alpha[c] = (active[c] && pq[c] > 0) ? rz[c] / pq[c] : 0.0;
    x += p * alpha.asDiagonal();
    r -= q * alpha.asDiagonal();
    project_mean_zero(r);

    Eigen::VectorXd rnorm = r.colwise().norm();
    for (Eigen::Index c = 0; c < cols; ++c)
      if (active[c] && rnorm[c] <= tol_ * bnorm[c]) active[c] = false;

    z = inv_deg_.asDiagonal() * r;
    Eigen::VectorXd rz_new = (r.array() * z.array()).colwise().sum();
    Eigen::VectorXd beta(cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      beta[c] = (active[c] && rz[c] > 0) ? rz_new[c] / rz[c] : 0.0;
    p = z + p * beta.asDiagonal();
    rz = rz_new;
  }
  project_mean_zero(x);
  if (stats) {
    stats->iterations = it;
    stats->dense = false;
    double worst = 0.0;
    Eigen::VectorXd rnorm = r.colwise().norm();
    for (Eigen::Index c = 0; c < cols; ++c)
      if (bnorm[c] > 0) worst = std::max(worst, rnorm[c] / bnorm[c]);
    stats->residual = worst;
  }
  return x;
}

Eigen::VectorXd LaplacianSolver::solve(const Eigen::VectorXd& b,
                                       SolveStats* stats) const {
  return solve_block(b, stats).col(0);
}

Eigen::VectorXd LaplacianSolver::pinv_diagonal(SolveStats* stats) const {
  constexpr int block = 32;
  Eigen::VectorXd diag(n_);
  SolveStats worst;
  for (int start = 0; start < n_; start += block) {
    int width = std::min(block, n_ - start);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_, width);
    for (int c = 0; c < width; ++c) rhs(start + c, c) = 1.0;
    SolveStats s;
    Eigen::MatrixXd cols = solve_block(rhs, &s);
    worst.iterations = std::max(worst.iterations, s.iterations);
    worst.residual = std::max(worst.residual, s.residual);
    worst.dense = s.dense;
    for (int c = 0; c < width; ++c) diag[start + c] = cols(start + c, c);
  }
  if (stats) *stats = worst;
  return diag;
}

PinvEngine build_pinv_engine(const LaplacianSolver& solver, const Graph& g) {
  if (g.m == 0) throw std::invalid_argument("build_pinv_engine: graph has no edges");
  PinvEngine e;
  e.m = g.m;
  e.degrees.resize(g.n);
  for (int u = 0; u < g.n; ++u) e.degrees[u] = g.degree(u);
  e.diag = solver.pinv_diagonal();
  e.w = solver.solve(e.degrees);
  e.trace = e.diag.sum();
  return e;
}

}  // namespace walklab
