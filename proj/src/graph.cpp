#include "isovig/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isovig {

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adj) twice += nb.size();
  return twice / 2;
}

bool Graph::has_edge(std::uint32_t u, std::uint32_t v) const {
  const auto& nb = adj[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

void Graph::finalize() {
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  offsets_.assign(n + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + adj[v].size();
}

Graph graph_from_edges(std::uint32_t n,
                       const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("graph_from_edges: vertex out of range");
    if (u == v) throw std::invalid_argument("graph_from_edges: self-loop");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  g.finalize();
  return g;
}

Graph make_path(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return graph_from_edges(n, e);
}

Graph make_cycle(std::uint32_t n) {
  if (n < 3) throw std::invalid_argument("make_cycle: need at least 3 vertices");
  auto g = make_path(n);
  g.adj[0].push_back(n - 1);
  g.adj[n - 1].push_back(0);
  g.finalize();
  return g;
}

Graph make_complete(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return graph_from_edges(n, e);
}

Graph make_star(std::uint32_t leaves) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t v = 1; v <= leaves; ++v) e.emplace_back(0u, v);
  return graph_from_edges(leaves + 1, e);
}

Graph make_star_of_stars(std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("make_star_of_stars: order must be positive");
  const std::uint32_t n = 1 + m + m * m;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t h = 1; h <= m; ++h) {
    e.emplace_back(0u, h);
    const std::uint32_t base = m + 1 + (h - 1) * m;
    for (std::uint32_t k = 0; k < m; ++k) e.emplace_back(h, base + k);
  }
  return graph_from_edges(n, e);
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << g.n << ' ' << g.edge_count() << '\n';
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::uint32_t v : g.adj[u])
      if (u < v) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::uint32_t n;
  std::size_t m;
  if (!(in >> n >> m)) throw std::runtime_error("bad edge-list header: " + path);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint32_t u, v;
    if (!(in >> u >> v)) throw std::runtime_error("truncated edge list: " + path);
    edges.emplace_back(u, v);
  }
  return graph_from_edges(n, edges);
}

}  // namespace isovig
