#include "walklab/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace walklab {

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= n || v >= n) return false;
  const auto& a = adj[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph make_graph(int n, const std::vector<Edge>& edges) {
  if (n < 0) throw std::invalid_argument("make_graph: negative vertex count");
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("make_graph: endpoint out of range");
    if (u == v) throw std::invalid_argument("make_graph: self-loop");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("make_graph: duplicate edge");
  }
  g.m = edges.size();
  return g;
}

std::vector<std::vector<int>> bfs_layers(const Graph& g, int root) {
  if (root < 0 || root >= g.n)
    throw std::invalid_argument("bfs_layers: root out of range");
  std::vector<int> dist(g.n, -1);
  std::deque<int> q{root};
  dist[root] = 0;
  std::vector<std::vector<int>> layers{{root}};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : g.adj[x]) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (static_cast<int>(layers.size()) <= dist[y]) layers.push_back({});
      layers[dist[y]].push_back(y);
      q.push_back(y);
    }
  }
  for (auto& layer : layers) std::sort(layer.begin(), layer.end());
  return layers;
}

NeighborhoodView neighborhood(const Graph& g, int center, int k) {
  if (center < 0 || center >= g.n)
    throw std::invalid_argument("neighborhood: center out of range");
  if (k < 0) throw std::invalid_argument("neighborhood: negative radius");
  NeighborhoodView view;
  view.center = center;
  view.radius = k;
  auto layers = bfs_layers(g, center);
  for (int d = 0; d <= k && d < static_cast<int>(layers.size()); ++d) {
    for (int v : layers[d]) view.ball.push_back(v);
    if (d == k) view.gamma_k = layers[d];
  }
  std::sort(view.ball.begin(), view.ball.end());
  std::sort(view.gamma_k.begin(), view.gamma_k.end());
  return view;
}

std::optional<int> distance(const Graph& g, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n || j >= g.n)
    throw std::invalid_argument("distance: vertex out of range");
  if (i == j) return 0;
  std::vector<int> dist(g.n, -1);
  std::deque<int> q{i};
  dist[i] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : g.adj[x]) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (y == j) return dist[y];
      q.push_back(y);
    }
  }
  return std::nullopt;
}

bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<char> seen(g.n, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : g.adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        q.push_back(y);
      }
  }
  return count == g.n;
}

Graph read_graph(std::istream& in) {
  std::string line;
  auto next_payload = [&](std::string& out) -> bool {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        out = line;
        return true;
      }
    }
    return false;
  };
  std::string header;
  if (!next_payload(header)) throw std::invalid_argument("read_graph: empty input");
  std::istringstream hs(header);
  long long n = 0, m = 0;
  if (!(hs >> n >> m) || n < 0 || m < 0)
    throw std::invalid_argument("read_graph: bad header, expected \"n m\"");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    std::string row;
    if (!next_payload(row))
      throw std::invalid_argument("read_graph: fewer edges than header claims");
    std::istringstream rs(row);
    long long u = 0, v = 0;
    if (!(rs >> u >> v)) throw std::invalid_argument("read_graph: bad edge line");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return make_graph(static_cast<int>(n), edges);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_graph_file: cannot open " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.m << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_graph_file: cannot open " + path);
  write_graph(out, g);
}

}  // namespace walklab
