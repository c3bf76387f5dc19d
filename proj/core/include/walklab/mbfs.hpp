#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

enum class MbfsStatus { included, clashed, unreached };

// Two-root breadth-first search with clash removal: a newly reached vertex
// survives only if it has exactly one live neighbor; with two or more it is
// removed from play entirely. Each round retires the previous live set.
struct MbfsTrace {
  std::pair<int, int> roots{0, 0};
  std::vector<std::vector<int>> levels;   // I_0 .. I_L, sorted; last may be empty
  std::vector<std::vector<int>> neutral;  // S_i = neutral set while I_i is live
  std::vector<std::vector<Edge>> level_edges;  // E_i between I_i and I_{i+1}
  std::vector<MbfsStatus> status;         // per vertex
  std::vector<int> level_of;              // level index, -1 if not in any level
  std::vector<int> parent_count;          // live neighbors seen in discovery round

  int depth() const { return static_cast<int>(levels.size()) - 1; }
};

struct MbfsOptions {
  bool clash_removal = true;  // off reduces the search to plain BFS layering
};

MbfsTrace run_mbfs(const Graph& g, std::pair<int, int> roots);
// generalized entry point: any number of distinct roots
MbfsTrace run_mbfs_from(const Graph& g, const std::vector<int>& roots,
                        const MbfsOptions& opt = {});

// Gamma*_i(x) = (vertices at hop distance i from x) intersected with the level
// i places beyond x's own. Empty when the target level does not exist; throws
// when x sits in no level.
std::vector<int> gamma_star(const Graph& g, const MbfsTrace& trace, int x, int i);

struct PrunedSets {
  int d = 1;
  // Gamma*_1 for every vertex of levels 0, 1 and 2, keyed (x, 1)
  std::map<std::pair<int, int>, std::vector<int>> gamma_star;
  std::map<int, std::vector<int>> phi1;  // x in I_1 -> Phi_1(x)
  std::map<int, std::vector<int>> psi1;  // root -> Psi_1(root)
  std::map<int, std::vector<int>> psi2;  // root -> Psi_2(root)
  std::map<int, int> parent1;            // y in I_2 -> its unique parent in I_1

  int phi1_count(int x) const;
  int psi1_count(int root) const;
  int psi2_count(int root) const;
};

// Drop level-2 vertices whose own Gamma*_1 has size <= d, then level-1
// vertices left with nothing, then propagate to the roots.
PrunedSets prune(const Graph& g, const MbfsTrace& trace, int d);

struct BEvent {
  bool at_u = false;
  bool at_v = false;
  bool joint = false;
};

BEvent b_event_holds(const PrunedSets& pruned, std::pair<int, int> roots);

struct StrongKPathWitness {
  int k = 0;
  // (x, y) in Psi_2(u) x Psi_2(v) -> lexicographically smallest bridge edge
  // (x_end, y_end) with x_end in Gamma*_k(x), y_end in Gamma*_k(y)
  std::map<std::pair<int, int>, std::pair<int, int>> bridges;
  // x in either Psi_2 side -> edges of the layered tree T_k(x)
  std::map<int, std::vector<Edge>> trees;
};

struct StrongKPathFailure {
  std::pair<int, int> pair{-1, -1};  // first offending (x, y) in lex order
  bool gamma_x_empty = false;
  bool gamma_y_empty = false;
  bool no_bridge = false;
};

struct StrongKPathResult {
  bool holds = false;
  bool vacuous = false;  // Psi_2(u) x Psi_2(v) empty
  std::optional<StrongKPathWitness> witness;
  std::optional<StrongKPathFailure> failure;
};

StrongKPathResult check_strong_k_path(const Graph& g, const MbfsTrace& trace,
                                      const PrunedSets& pruned, int k);

enum class Regime { sparse, dense };

// depth at which two pruned neighborhoods get large enough to bridge;
// requires np > 1
int recommended_k(int n, double p, Regime regime);

// smallest k in 0 .. ceil(log n / (2 log np)) + 2 whose check succeeds
struct KScan {
  int k = -1;  // -1 when no k in range succeeds
  bool vacuous = false;
  int cap = 0;
};
KScan scan_k(const Graph& g, const MbfsTrace& trace, const PrunedSets& pruned);

// S_k(x): the part of snapshot S_k no other live level-k vertex touches
std::vector<int> s_k_of(const Graph& g, const MbfsTrace& trace, int x);

}  // namespace walklab
