#pragma once

#include <optional>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/mbfs.hpp"

namespace walklab {

// Paths between the two roots that may share vertices freely inside the
// distance-1 balls of the endpoints but must be vertex-disjoint outside them.

// one path per matched Psi_2 pair: root, level-1 parent, tree path out to the
// bridge, across, and mirrored back; every path has length 2k+5
std::vector<std::vector<int>> paths2_construct(const Graph& g,
                                               const MbfsTrace& trace,
                                               const PrunedSets& pruned,
                                               const StrongKPathWitness& witness);

// integer max-flow relaxation: split unit capacity on vertices outside both
// balls, ball vertices uncapacitated.  When every i-j route has to leave the
// balls (distance >= 4) edges carry no capacity of their own and the flow
// genuinely bounds any packing that is vertex-disjoint outside the balls.
// Closer pairs admit routes the vertex capacities never see, which would make
// the flow unbounded; the value degrades to edge-distinct route capacity
// (unit capacity per edge) there and is only a heuristic ceiling.
int paths2_maxflow_upper(const Graph& g, int i, int j);

struct Gamma2Bound {
  int value = 0;   // min of the two second-neighborhood sizes
  bool valid = false;  // only a bound when no i-j path shorter than 4 exists
};
Gamma2Bound paths2_gamma2_upper(const Graph& g, int i, int j);

struct Paths2Exact {
  int value = 0;
  bool degenerate = false;  // both balls cover everything: disjointness is vacuous
  std::size_t paths_seen = 0;
};

// enumerate simple i-j paths of length <= l, then a maximum packing under
// pairwise disjointness outside the balls (branch and bound); refused when the
// instance is too big to enumerate
Paths2Exact paths2_exact_bruteforce(const Graph& g, int i, int j, int l,
                                    std::size_t max_paths = 100000);

struct Paths2Bracket {
  int i = 0, j = 0;         // root pair
  int k = 0;                // depth the witness check ran at
  int l = 0;                // length cap in effect for the exact count
  int lower = 0;            // constructed count; 0 without a usable witness
  std::vector<std::vector<int>> paths;  // the constructed paths themselves
  int upper_menger = 0;
  Gamma2Bound upper_gamma2;
  std::optional<int> exact;
};

// bundle of everything above for one root pair; k < 0 scans
Paths2Bracket paths2_bracket(const Graph& g, int i, int j, int d, int k,
                             bool with_exact = false, int l = -1);

}  // namespace walklab
