#include "isovig/netgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "isovig/rng.hpp"

namespace isovig::netgen {

DegreeSequence sample_power_law_degrees(std::uint32_t n, double gamma, std::uint32_t d_min,
                                        std::uint32_t d_max, std::uint64_t seed) {
  if (!(gamma > 2.0)) throw std::invalid_argument("sample_power_law_degrees: gamma must exceed 2");
  if (d_min < 1 || d_min > d_max)
    throw std::invalid_argument("sample_power_law_degrees: need 1 <= d_min <= d_max");

  // Inverse-CDF table over the truncated support.
  const std::size_t support = d_max - d_min + 1;
  std::vector<double> cdf(support);
  double z = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    z += std::pow(static_cast<double>(d_min + i), -gamma);
    cdf[i] = z;
  }
  for (double& c : cdf) c /= z;
  cdf.back() = 1.0;

  DegreeSequence out;
  out.gamma = gamma;
  out.d_min = d_min;
  out.d_max = d_max;
  out.seed = seed;
  out.degrees.resize(n);

  Rng rng(seed);
  std::uint64_t sum = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t i = std::min<std::size_t>(it - cdf.begin(), support - 1);
    out.degrees[v] = d_min + static_cast<std::uint32_t>(i);
    sum += out.degrees[v];
  }

  if (sum % 2 == 1) {
    std::vector<std::uint32_t> below;
    for (std::uint32_t v = 0; v < n; ++v)
      if (out.degrees[v] < d_max) below.push_back(v);
    std::uint32_t pick;
    if (!below.empty()) {
      pick = below[rng.below(below.size())];
    } else {
      // Degenerate support with every vertex at d_max: the increment has to
      // exceed d_max to restore parity.
      pick = static_cast<std::uint32_t>(rng.below(n));
    }
    out.degrees[pick] += 1;
    out.parity_adjusted = true;
    out.parity_vertex = pick;
  }
  return out;
}

namespace {

// Shuffles the half-edge array and pairs consecutive entries.  A uniform
// permutation induces a uniform perfect matching.
std::vector<std::pair<std::uint32_t, std::uint32_t>> match_half_edges(
    const std::vector<std::uint32_t>& degrees, Rng& rng) {
  std::vector<std::uint32_t> half;
  for (std::uint32_t v = 0; v < degrees.size(); ++v)
    half.insert(half.end(), degrees[v], v);
  for (std::size_t i = half.size(); i > 1; --i)
    std::swap(half[i - 1], half[rng.below(i)]);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(half.size() / 2);
  for (std::size_t i = 0; i + 1 < half.size(); i += 2) pairs.emplace_back(half[i], half[i + 1]);
  return pairs;
}

}  // namespace

ConfigModelResult build_configuration_model(const std::vector<std::uint32_t>& degrees,
                                            std::uint64_t seed) {
  const std::uint32_t n = static_cast<std::uint32_t>(degrees.size());
  std::uint64_t sum = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
  if (sum % 2 != 0)
    throw std::invalid_argument("build_configuration_model: degree sum must be even");

  Rng rng(seed);
  const auto pairs = match_half_edges(degrees, rng);

  // Matching audit: every vertex must appear exactly deg(v) times before any
  // erasure.
  std::vector<std::uint32_t> matched(n, 0);
  for (auto [u, v] : pairs) {
    ++matched[u];
    ++matched[v];
  }
  for (std::uint32_t v = 0; v < n; ++v)
    if (matched[v] != degrees[v])
      throw std::logic_error("build_configuration_model: matching lost a half-edge");

  ConfigModelResult out;
  out.graph.n = n;
  out.graph.adj.assign(n, {});
  for (auto [u, v] : pairs) {
    if (u == v) continue;  // erase self-loop
    out.graph.adj[u].push_back(v);
    out.graph.adj[v].push_back(u);
  }
  for (auto& nb : out.graph.adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());  // collapse parallels
  }
  out.graph.finalize();

  out.deficits.resize(n);
  for (std::uint32_t v = 0; v < n; ++v)
    out.deficits[v] = degrees[v] - out.graph.degree(v);
  return out;
}

Graph sample_regular_graph(std::uint32_t n, std::uint32_t d, std::uint64_t seed,
                           std::uint32_t max_attempts) {
  if (static_cast<std::uint64_t>(n) * d % 2 != 0)
    throw std::invalid_argument("sample_regular_graph: n*d must be even");
  if (d >= n) throw std::invalid_argument("sample_regular_graph: need d < n");
  const std::vector<std::uint32_t> degrees(n, d);
  Rng rng(seed);
  for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    const auto pairs = match_half_edges(degrees, rng);
    bool simple = true;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [u, v] : pairs) {
      if (u == v) {
        simple = false;
        break;
      }
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    if (simple) {
      for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
          simple = false;
          break;
        }
      }
    }
    if (simple) {
      Graph g;
      g.n = n;
      g.adj = std::move(adj);
      g.finalize();
      return g;
    }
  }
  return build_configuration_model(degrees, mix_seed(seed, 1)).graph;
}

std::optional<StarOfStars> find_star_of_stars(const Graph& g, std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("find_star_of_stars: order must be positive");

  std::vector<std::uint32_t> by_degree(g.n);
  std::iota(by_degree.begin(), by_degree.end(), 0u);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return g.degree(a) > g.degree(b); });

  std::vector<std::uint32_t> stamp(g.n, 0);
  std::uint32_t epoch = 0;
  const auto claimed = [&](std::uint32_t v) { return stamp[v] == epoch; };
  const auto claim = [&](std::uint32_t v) { stamp[v] = epoch; };

  for (std::uint32_t c : by_degree) {
    if (g.degree(c) < m) break;  // sorted, nobody later qualifies
    ++epoch;
    claim(c);

    std::vector<std::uint32_t> hub_order(g.adj[c]);
    std::stable_sort(hub_order.begin(), hub_order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return g.degree(a) > g.degree(b); });

    StarOfStars s;
    s.center = c;
    for (std::uint32_t h : hub_order) {
      if (s.hubs.size() == m) break;
      if (claimed(h)) continue;
      std::vector<std::uint32_t> free;
      for (std::uint32_t w : g.adj[h]) {
        if (!claimed(w) && w != h) free.push_back(w);
        if (free.size() == m) break;
      }
      if (free.size() < m) continue;
      claim(h);
      for (std::uint32_t w : free) claim(w);
      s.hubs.push_back(h);
      s.leaves.push_back(std::move(free));
    }
    if (s.hubs.size() == m) return s;
  }
  return std::nullopt;
}

bool validate_star_of_stars(const Graph& g, const StarOfStars& s, std::uint32_t m) {
  if (s.hubs.size() != m || s.leaves.size() != m) return false;
  std::vector<std::uint32_t> all{s.center};
  for (std::uint32_t i = 0; i < m; ++i) {
    if (s.leaves[i].size() != m) return false;
    all.push_back(s.hubs[i]);
    all.insert(all.end(), s.leaves[i].begin(), s.leaves[i].end());
  }
  for (std::uint32_t v : all)
    if (v >= g.n) return false;
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  if (all.size() != 1 + static_cast<std::size_t>(m) + static_cast<std::size_t>(m) * m) return false;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (!g.has_edge(s.center, s.hubs[i])) return false;
    for (std::uint32_t leaf : s.leaves[i])
      if (!g.has_edge(s.hubs[i], leaf)) return false;
  }
  return true;
}

std::size_t external_boundary(const Graph& g, const std::vector<std::uint32_t>& b) {
  std::vector<char> in_b(g.n, 0), seen(g.n, 0);
  for (std::uint32_t v : b) {
    if (v >= g.n) throw std::invalid_argument("external_boundary: vertex out of range");
    in_b[v] = 1;
  }
  std::size_t count = 0;
  for (std::uint32_t v : b)
    for (std::uint32_t w : g.adj[v])
      if (!in_b[w] && !seen[w]) {
        seen[w] = 1;
        ++count;
      }
  return count;
}

namespace {

double boundary_ratio(const Graph& g, const std::vector<std::uint32_t>& b) {
  return static_cast<double>(external_boundary(g, b)) / static_cast<double>(b.size());
}

// First-improvement swap descent: move an external-boundary vertex in and an
// interior vertex out while the ratio drops.
void descend(const Graph& g, std::vector<std::uint32_t>& b, double& ratio) {
  std::vector<char> in_b(g.n, 0);
  for (std::uint32_t v : b) in_b[v] = 1;
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 500) {
    improved = false;
    std::vector<std::uint32_t> boundary;
    {
      std::vector<char> seen(g.n, 0);
      for (std::uint32_t v : b)
        for (std::uint32_t w : g.adj[v])
          if (!in_b[w] && !seen[w]) {
            seen[w] = 1;
            boundary.push_back(w);
          }
    }
    for (std::uint32_t in_v : boundary) {
      for (std::size_t i = 0; i < b.size() && !improved; ++i) {
        const std::uint32_t out_v = b[i];
        b[i] = in_v;
        const double r = boundary_ratio(g, b);
        if (r < ratio) {
          ratio = r;
          in_b[out_v] = 0;
          in_b[in_v] = 1;
          improved = true;
        } else {
          b[i] = out_v;
        }
      }
      if (improved) break;
    }
  }
}

}  // namespace

ExpansionReport check_expansion(const Graph& g, double eps_lo, double eps_hi, ExpansionMode mode,
                                std::size_t samples, std::uint64_t seed) {
  if (g.n == 0) throw std::invalid_argument("check_expansion: empty graph");
  if (!(eps_lo <= eps_hi)) throw std::invalid_argument("check_expansion: eps_lo > eps_hi");
  const double n = static_cast<double>(g.n);
  std::size_t lo = static_cast<std::size_t>(std::ceil(eps_lo * n));
  std::size_t hi = static_cast<std::size_t>(std::floor(eps_hi * n));
  lo = std::max<std::size_t>(lo, 1);
  hi = std::min<std::size_t>(hi, g.n);
  if (lo > hi) throw std::invalid_argument("check_expansion: no integer size in window");

  ExpansionReport rep;
  rep.mode = mode;
  rep.eps_lo = eps_lo;
  rep.eps_hi = eps_hi;
  rep.size_lo = lo;
  rep.size_hi = hi;
  rep.delta = std::numeric_limits<double>::infinity();

  if (mode == ExpansionMode::exact) {
    if (g.n > 24) throw std::invalid_argument("check_expansion: exact mode needs n <= 24");
    std::vector<std::uint32_t> adj_mask(g.n, 0);
    for (std::uint32_t v = 0; v < g.n; ++v)
      for (std::uint32_t w : g.adj[v]) adj_mask[v] |= 1u << w;
    const std::uint32_t full = (1u << g.n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::size_t size = std::popcount(mask);
      if (size < lo || size > hi) continue;
      std::uint32_t nbrs = 0;
      for (std::uint32_t rest = mask; rest;) {
        const int v = std::countr_zero(rest);
        rest &= rest - 1;
        nbrs |= adj_mask[v];
      }
      const double ratio =
          static_cast<double>(std::popcount(nbrs & ~mask)) / static_cast<double>(size);
      if (ratio < rep.delta) {
        rep.delta = ratio;
        rep.witness.clear();
        for (std::uint32_t rest = mask; rest;) {
          rep.witness.push_back(static_cast<std::uint32_t>(std::countr_zero(rest)));
          rest &= rest - 1;
        }
      }
    }
    return rep;
  }

  if (samples == 0) throw std::invalid_argument("check_expansion: sampled mode needs samples > 0");
  Rng rng(seed);
  std::vector<std::uint32_t> pool(g.n);
  std::iota(pool.begin(), pool.end(), 0u);
  std::vector<std::uint32_t> best_overall;
  for (std::size_t size = lo; size <= hi; ++size) {
    std::vector<std::uint32_t> best_of_size;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
      for (std::size_t i = 0; i < size; ++i)
        std::swap(pool[i], pool[i + rng.below(g.n - i)]);
      std::vector<std::uint32_t> b(pool.begin(), pool.begin() + size);
      const double r = boundary_ratio(g, b);
      if (r < best_ratio) {
        best_ratio = r;
        best_of_size = std::move(b);
      }
    }
    descend(g, best_of_size, best_ratio);
    if (best_ratio < rep.delta) {
      rep.delta = best_ratio;
      best_overall = best_of_size;
    }
  }
  double r = rep.delta;
  descend(g, best_overall, r);
  rep.delta = r;
  std::sort(best_overall.begin(), best_overall.end());
  rep.witness = std::move(best_overall);
  return rep;
}

}  // namespace isovig::netgen
