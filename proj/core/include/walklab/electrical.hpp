#pragma once

#include <map>
#include <utility>

#include "walklab/graph.hpp"
#include "walklab/laplacian.hpp"
#include "walklab/mbfs.hpp"

namespace walklab {

struct ResistanceResult {
  enum class Method { dense, cg, spanning_tree };
  double value = 0.0;  // +infinity marks a disconnected pair
  Method method = Method::dense;
  int iterations = 0;
  double residual = 0.0;

  bool finite() const;
};

// unit potential-flow solve, restricted to the endpoints' component; pairs in
// different components yield the infinity marker
ResistanceResult exact_resistance(const Graph& g, int i, int j);
// same, reusing a prepared solver (caller promises g is connected)
ResistanceResult exact_resistance(const LaplacianSolver& solver, const Graph& g,
                                  int i, int j);

// exact ratio (separating two-forests) / (spanning trees) via integer
// determinants; refused above 12 vertices
ResistanceResult spanning_tree_resistance_oracle(const Graph& g, int i, int j);

// Unit-strength flow, stored once per undirected edge in canonical
// orientation; theta() reads either direction with the sign flipped.
struct UnitFlow {
  int source = 0;
  int sink = 0;
  std::map<Edge, double> values;

  double theta(int x, int y) const;
  void add(int x, int y, double amount);
};

double flow_energy(const UnitFlow& flow);

struct FlowValidation {
  double max_node_imbalance = 0.0;     // worst |net flow| away from source/sink
  double source_strength_error = 0.0;  // |net out of source - 1|
  double sink_strength_error = 0.0;    // |net into sink - 1|
  int nonedge_support = 0;             // values stored on pairs not in E(G)

  double max_violation() const;
};

FlowValidation validate_flow(const Graph& g, const UnitFlow& flow);

// The witness flow: unit strength out of the first root, split evenly across
// Psi_1, then across each Phi_1, carried across the bridge edges, and mirrored
// into the second root; layered-tree edges carry their subtree's bridge total.
UnitFlow build_lemma_flow(const Graph& g, const MbfsTrace& trace,
                          const PrunedSets& pruned,
                          const StrongKPathWitness& witness);

// closed-form energy bound over the pruned counts; infinite when a Psi_1 side
// is empty
double resistance_upper_bound_formula(const PrunedSets& pruned, int k);

// 1/(deg+1) + 1/(deg+1) floor from the one-step neighborhoods
double resistance_lower_bound(const Graph& g, int i, int j);

// hop distance as a resistance ceiling; infinity when unreachable
double distance_resistance_bound(const Graph& g, int i, int j);

}  // namespace walklab
