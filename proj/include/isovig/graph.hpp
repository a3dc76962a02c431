#pragma once

// Simple undirected graph with sorted adjacency lists, plus builders for the
// standard layouts used by the experiments and an edge-list file format:
//
//   n m
//   u v        (one line per edge, 0-indexed, u < v)

#include <cstdint>
#include <string>
#include <vector>

namespace isovig {

struct Graph {
  std::uint32_t n = 0;
  std::vector<std::vector<std::uint32_t>> adj;

  std::size_t edge_count() const;
  std::uint32_t degree(std::uint32_t v) const { return static_cast<std::uint32_t>(adj[v].size()); }
  bool has_edge(std::uint32_t u, std::uint32_t v) const;

  // Index of the directed edge (u, adj[u][k]) in a flat array of size 2m.
  // Offsets are cached by finalize().
  std::size_t directed_edge_index(std::uint32_t u, std::size_t k) const {
    return offsets_[u] + k;
  }
  std::size_t directed_edge_count() const { return offsets_.empty() ? 0 : offsets_.back(); }

  // Sorts adjacency lists and rebuilds the directed-edge offsets.  Must be
  // called after manual edits to adj.
  void finalize();

 private:
  std::vector<std::size_t> offsets_;  // size n + 1
};

// Builds a graph from a list of undirected edges; rejects loops, ignores
// duplicates.
Graph graph_from_edges(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

Graph make_path(std::uint32_t n);
Graph make_cycle(std::uint32_t n);
Graph make_complete(std::uint32_t n);
// Star with one center (vertex 0) and `leaves` leaves.
Graph make_star(std::uint32_t leaves);

// Two-level star: center 0, hubs 1..m, hub i owning leaves
// m + 1 + (i-1)*m .. m + (i)*m.  1 + m + m*m vertices total.
Graph make_star_of_stars(std::uint32_t m);

void write_edge_list(const Graph& g, const std::string& path);
Graph read_edge_list(const std::string& path);

}  // namespace isovig
