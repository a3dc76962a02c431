#pragma once

// Random graph generation (truncated power-law degrees, configuration model),
// two-level star detection, and edge-expansion measurement.

#include <cstdint>
#include <optional>
#include <vector>

#include "isovig/graph.hpp"

namespace isovig::netgen {

struct DegreeSequence {
  std::vector<std::uint32_t> degrees;
  double gamma = 0.0;
  std::uint32_t d_min = 0;
  std::uint32_t d_max = 0;
  std::uint64_t seed = 0;
  // Set when one vertex was incremented to make the sum even.
  bool parity_adjusted = false;
  std::uint32_t parity_vertex = 0;
};

// Draws n i.i.d. degrees from P(D = k) proportional to k^(-gamma) on
// [d_min, d_max], then fixes parity by incrementing one uniformly chosen
// vertex with degree below d_max (any vertex if all sit at d_max).
DegreeSequence sample_power_law_degrees(std::uint32_t n, double gamma, std::uint32_t d_min,
                                        std::uint32_t d_max, std::uint64_t seed);

struct ConfigModelResult {
  Graph graph;
  // Requested minus realized degree per vertex (loss to erased loops and
  // collapsed parallel edges).
  std::vector<std::uint32_t> deficits;
};

// Uniform half-edge matching; self-loops erased, parallel edges collapsed.
ConfigModelResult build_configuration_model(const std::vector<std::uint32_t>& degrees,
                                            std::uint64_t seed);

// Random d-regular graph: retries the half-edge matching until it is simple
// (every vertex keeps degree exactly d).  Falls back to erasure after
// max_attempts failures.
Graph sample_regular_graph(std::uint32_t n, std::uint32_t d, std::uint64_t seed,
                           std::uint32_t max_attempts = 10000);

struct StarOfStars {
  std::uint32_t center = 0;
  std::vector<std::uint32_t> hubs;
  std::vector<std::vector<std::uint32_t>> leaves;  // leaves[i] belong to hubs[i]
  std::uint32_t order() const { return static_cast<std::uint32_t>(hubs.size()); }
};

// Greedy search for an order-m two-level star: a center adjacent to m hubs,
// each hub adjacent to m private leaves, all 1 + m + m^2 vertices distinct.
// Candidate centers and hubs are scanned in decreasing degree order (ties by
// id); each center attempt starts fresh.  `nullopt` means the greedy failed,
// not that no such structure exists.
std::optional<StarOfStars> find_star_of_stars(const Graph& g, std::uint32_t m);

bool validate_star_of_stars(const Graph& g, const StarOfStars& s, std::uint32_t m);

// Number of vertices outside B adjacent to at least one vertex of B.
std::size_t external_boundary(const Graph& g, const std::vector<std::uint32_t>& b);

enum class ExpansionMode { exact, sampled };

struct ExpansionReport {
  ExpansionMode mode = ExpansionMode::exact;
  double eps_lo = 0.0, eps_hi = 0.0;
  std::size_t size_lo = 0, size_hi = 0;   // admissible |B| range examined
  double delta = 0.0;                     // minimum |boundary(B)| / |B| found
  std::vector<std::uint32_t> witness;     // a set attaining `delta`
};

// Minimum boundary-to-size ratio over subsets with eps_lo*n <= |B| <= eps_hi*n.
// Exact mode enumerates every subset (n <= 24 required); sampled mode draws
// `samples` uniform subsets per admissible size and sharpens the best ones by
// greedy swaps, giving an upper bound on the true minimum.
ExpansionReport check_expansion(const Graph& g, double eps_lo, double eps_hi, ExpansionMode mode,
                                std::size_t samples = 0, std::uint64_t seed = 0);

}  // namespace isovig::netgen
