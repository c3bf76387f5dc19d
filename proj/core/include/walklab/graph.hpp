#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace walklab {

using Edge = std::pair<int, int>;  // canonical orientation u < v

// Simple undirected graph, adjacency lists kept sorted.
struct Graph {
  int n = 0;
  std::size_t m = 0;
  std::vector<std::vector<int>> adj;

  const std::vector<int>& neighbors(int v) const { return adj[v]; }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;
  std::vector<Edge> edges() const;  // canonical, sorted
};

// rejects self-loops, duplicate edges, out-of-range endpoints
Graph make_graph(int n, const std::vector<Edge>& edges);

struct NeighborhoodView {
  int center = 0;
  int radius = 0;
  std::vector<int> gamma_k;  // vertices at distance exactly k
  std::vector<int> ball;     // vertices at distance <= k
};

NeighborhoodView neighborhood(const Graph& g, int center, int k);

// BFS layers from one root; layer 0 is {root}
std::vector<std::vector<int>> bfs_layers(const Graph& g, int root);

// hop distance; empty when unreachable
std::optional<int> distance(const Graph& g, int i, int j);

bool is_connected(const Graph& g);

// ---- edge-list text format ----
// '#' starts a comment; first payload line is "n m"; then one "u v" per edge.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace walklab
