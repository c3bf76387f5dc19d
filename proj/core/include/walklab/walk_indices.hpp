#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/laplacian.hpp"

namespace walklab {

// degree / 2m; needs at least one edge
std::vector<double> stationary(const Graph& g);

// expected steps from i to j, via the grounded Laplacian first-step system
double hitting_time(const Graph& g, int i, int j);
// whole column h(., j) from one grounded solve
std::vector<double> hitting_column(const Graph& g, int j);

// resistance-form cross-route; the table must cover (u,i) and (u,j) for all u,
// canonical (min,max) keys, missing entries are a parameter error
double hitting_time_tetali(const Graph& g, int i, int j,
                           const std::map<Edge, double>& resistance);

// 2m R(i,j); verifies the round-trip sum h(i,j) + h(j,i) agrees to 1e-8
double commute_time(const Graph& g, int i, int j);

// n * trace of the Laplacian pseudoinverse = sum of pairwise resistances
double kirchhoff_index(const Graph& g);
// dense eigenvalue route, n * sum of reciprocal nonzero eigenvalues (n <= 300)
double kirchhoff_index_spectral(const Graph& g);

// mean hitting time out of i, (1/(n-1)) sum_j h(i,j)
double cover_cost(const Graph& g, int i);
// mean over ordered pairs; computed from hitting columns and verified against
// 2m K / (n (n-1)) to 1e-8
double uniform_cover_cost(const Graph& g);

// stationary-start hitting time into j
double random_target(const Graph& g, int j);
// stationary-target mix sum_j pi(j) h(i,j); start-independent, verified across
// two starts
double kemeny(const Graph& g);
// stationary-pair mean hitting time
double mean_hitting(const Graph& g);

struct IndexReport {
  int n = 0;
  std::size_t m = 0;
  std::vector<double> pi;
  std::map<std::pair<int, int>, double> hitting;  // ordered sampled pairs
  std::map<Edge, double> kappa;                   // canonical sampled pairs
  std::map<Edge, double> resistance;              // canonical sampled pairs
  double kirchhoff = 0.0;
  std::vector<double> cover_cost;    // per start vertex
  double uniform_cover_cost = 0.0;
  std::vector<double> random_target; // per target vertex
  double kemeny = 0.0;
  double mean_hitting = 0.0;
};

// One pseudoinverse pass for everything: scalar indices exactly, pairwise
// entries for all pairs when they fit in pair_budget, otherwise for a seeded
// uniform sample of pair_budget pairs.
IndexReport full_report(const Graph& g, std::size_t pair_budget,
                        std::uint64_t seed = 0);
// same, for an explicit pair list
IndexReport full_report_for_pairs(const Graph& g, const std::vector<Edge>& pairs);

// pairwise entries from an already-built engine (shared by the experiment loop)
struct PairIndices {
  double resistance = 0.0;
  double hitting_ij = 0.0;
  double hitting_ji = 0.0;
  double commute = 0.0;
  int iterations = 0;
  double residual = 0.0;
};
PairIndices pair_indices(const LaplacianSolver& solver, const PinvEngine& engine,
                         int i, int j);

}  // namespace walklab
