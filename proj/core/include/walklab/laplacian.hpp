#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "walklab/graph.hpp"

namespace walklab {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // relative to the right-hand side
  bool dense = false;
};

// Solves L x = b on the mean-zero subspace, for connected graphs. Small
// systems go through a dense factorization of L + J/n; larger ones through
// Jacobi-preconditioned conjugate gradients with mean-zero projection. Right
// hand sides are projected, results come back mean-zero.
class LaplacianSolver {
 public:
  explicit LaplacianSolver(const Graph& g, int dense_cutoff = 500,
                           double tol = 1e-10, int max_iter_factor = 10);

  int n() const { return n_; }
  bool dense() const { return dense_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveStats* stats = nullptr) const;
  // column-independent batched solve; stats reports the worst column
  Eigen::MatrixXd solve_block(const Eigen::MatrixXd& B, SolveStats* stats = nullptr) const;
  // diagonal of the pseudoinverse, solved in blocks
  Eigen::VectorXd pinv_diagonal(SolveStats* stats = nullptr) const;

 private:
  int n_;
  bool dense_;
  double tol_;
  int max_iter_;
  Eigen::SparseMatrix<double> lap_;
  Eigen::VectorXd inv_deg_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

// pseudoinverse summaries most walk indices are built from
struct PinvEngine {
  std::size_t m = 0;
  Eigen::VectorXd degrees;
  Eigen::VectorXd diag;     // diag of pseudoinverse
  Eigen::VectorXd w;        // pseudoinverse applied to the degree vector
  double trace = 0.0;
};

// requires a connected graph with at least one edge
PinvEngine build_pinv_engine(const LaplacianSolver& solver, const Graph& g);

}  // namespace walklab
