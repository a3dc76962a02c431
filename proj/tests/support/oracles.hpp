#pragma once

// Independent reference implementations used to pin expected values in the
// test suites.  Everything here is written from the definitions, brute force
// where feasible, deliberately sharing no code with the library internals.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isovig/dynamics.hpp"
#include "isovig/graph.hpp"

namespace oracle {

// Enumerates every perfect matching of the half-edge multiset for `degrees`
// and returns the fraction whose loop-erased, parallel-collapsed simple graph
// satisfies `pred`.
inline double matching_probability(const std::vector<std::uint32_t>& degrees,
                                   const std::function<bool(const isovig::Graph&)>& pred) {
  std::vector<std::uint32_t> owner;
  for (std::uint32_t v = 0; v < degrees.size(); ++v)
    owner.insert(owner.end(), degrees[v], v);
  if (owner.size() % 2 != 0) throw std::invalid_argument("odd half-edge count");

  std::uint64_t total = 0, hits = 0;
  std::vector<char> used(owner.size(), 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

  const std::function<void()> recurse = [&] {
    std::size_t first = owner.size();
    for (std::size_t i = 0; i < owner.size(); ++i)
      if (!used[i]) {
        first = i;
        break;
      }
    if (first == owner.size()) {
      ++total;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
      for (auto [u, v] : pairs)
        if (u != v) edges.emplace_back(std::min(u, v), std::max(u, v));
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      isovig::Graph g = isovig::graph_from_edges(static_cast<std::uint32_t>(degrees.size()), edges);
      if (pred(g)) ++hits;
      return;
    }
    used[first] = 1;
    for (std::size_t j = first + 1; j < owner.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      pairs.emplace_back(owner[first], owner[j]);
      recurse();
      pairs.pop_back();
      used[j] = 0;
    }
    used[first] = 0;
  };
  recurse();
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Exhaustive existence check for an order-m two-level star, by backtracking
// over centers, hub subsets and leaf assignments.  Exponential; small graphs
// only.
inline bool star_of_stars_exists(const isovig::Graph& g, std::uint32_t m) {
  std::vector<char> claimed(g.n, 0);

  // Assigns m free leaves from hub index k onward.
  std::function<bool(const std::vector<std::uint32_t>&, std::size_t)> assign_leaves =
      [&](const std::vector<std::uint32_t>& hubs, std::size_t k) -> bool {
    if (k == hubs.size()) return true;
    const std::uint32_t h = hubs[k];
    std::vector<std::uint32_t> free;
    for (std::uint32_t w : g.adj[h])
      if (!claimed[w]) free.push_back(w);
    if (free.size() < m) return false;
    // Choose every m-subset of the free neighbours.
    std::vector<std::uint32_t> pick(m);
    std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t idx,
                                                               std::size_t from) -> bool {
      if (idx == m) {
        for (std::uint32_t w : pick) claimed[w] = 1;
        const bool ok = assign_leaves(hubs, k + 1);
        for (std::uint32_t w : pick) claimed[w] = 0;
        return ok;
      }
      for (std::size_t i = from; i < free.size(); ++i) {
        pick[idx] = free[i];
        if (choose(idx + 1, i + 1)) return true;
      }
      return false;
    };
    return choose(0, 0);
  };

  for (std::uint32_t c = 0; c < g.n; ++c) {
    if (g.degree(c) < m) continue;
    const auto& nbrs = g.adj[c];
    std::vector<std::uint32_t> hubs(m);
    std::function<bool(std::size_t, std::size_t)> choose_hubs = [&](std::size_t idx,
                                                                    std::size_t from) -> bool {
      if (idx == m) {
        std::fill(claimed.begin(), claimed.end(), 0);
        claimed[c] = 1;
        for (std::uint32_t h : hubs) claimed[h] = 1;
        return assign_leaves(hubs, 0);
      }
      for (std::size_t i = from; i < nbrs.size(); ++i) {
        hubs[idx] = nbrs[i];
        if (choose_hubs(idx + 1, i + 1)) return true;
      }
      return false;
    };
    if (choose_hubs(0, 0)) return true;
  }
  return false;
}

inline std::size_t boundary_naive(const isovig::Graph& g, const std::vector<std::uint32_t>& b) {
  std::vector<char> in_b(g.n, 0);
  for (std::uint32_t v : b) in_b[v] = 1;
  std::size_t count = 0;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    if (in_b[v]) continue;
    for (std::uint32_t w : g.adj[v])
      if (in_b[w]) {
        ++count;
        break;
      }
  }
  return count;
}

// Exact minimum boundary ratio over all subsets with sizes in [lo, hi],
// enumerated combination by combination.
inline double min_expansion_bruteforce(const isovig::Graph& g, std::size_t lo, std::size_t hi) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> pick;
  std::function<void(std::uint32_t, std::size_t)> choose = [&](std::uint32_t from,
                                                               std::size_t want) {
    if (want == 0) {
      const double r =
          static_cast<double>(boundary_naive(g, pick)) / static_cast<double>(pick.size());
      best = std::min(best, r);
      return;
    }
    for (std::uint32_t v = from; v + want <= g.n; ++v) {
      pick.push_back(v);
      choose(v + 1, want - 1);
      pick.pop_back();
    }
  };
  for (std::size_t s = lo; s <= hi; ++s) choose(0, s);
  return best;
}

// Ruin probability of the +-1 walk via the absorbing-chain linear system,
// solved with the tridiagonal (Thomas) algorithm.
inline double ruin_probability_chain(double p_up, std::uint32_t down_gap, std::uint32_t up_gap) {
  const std::uint32_t n_states = down_gap + up_gap + 1;  // 0 .. a+b
  const std::uint32_t interior = n_states - 2;
  const double q = 1.0 - p_up;
  // h_i = q h_{i-1} + p h_{i+1} for i in 1..a+b-1, h_0 = 1, h_{a+b} = 0.
  std::vector<double> sub(interior, -q), diag(interior, 1.0), sup(interior, -p_up),
      rhs(interior, 0.0);
  rhs[0] += q;  // h_0 = 1 folded into the first equation
  for (std::uint32_t i = 1; i < interior; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> h(interior);
  h[interior - 1] = rhs[interior - 1] / diag[interior - 1];
  for (std::int64_t i = static_cast<std::int64_t>(interior) - 2; i >= 0; --i)
    h[i] = (rhs[i] - sup[i] * h[i + 1]) / diag[i];
  return h[down_gap - 1];  // start at height a above the lower barrier
}

struct NaiveRates {
  double infection = 0.0;
  double recovery = 0.0;
  double isolation = 0.0;
  double return_from_isolation = 0.0;
  std::uint64_t si_edges = 0;
};

// Aggregate class rates straight from the transition rules, one vertex at a
// time.
inline NaiveRates naive_rates(const isovig::Graph& g, const std::vector<std::int8_t>& state,
                              const isovig::dynamics::ModelParams& p) {
  using isovig::dynamics::Variant;
  NaiveRates r;
  for (std::uint32_t v = 0; v < g.n; ++v) {
    std::uint32_t inf = 0, healthy = 0;
    for (std::uint32_t w : g.adj[v]) {
      if (state[w] == 1) ++inf;
      if (state[w] == 0) ++healthy;
    }
    switch (state[v]) {
      case 0:
        r.infection += p.lambda * static_cast<double>(inf);
        r.si_edges += inf;
        if (p.variant == Variant::comparison) r.isolation += p.alpha;
        break;
      case 1:
        r.recovery += 1.0;
        if (p.variant == Variant::isolation || p.variant == Variant::comparison)
          r.isolation += p.alpha;
        if (p.variant == Variant::vigilance)
          r.isolation += p.alpha * static_cast<double>(healthy);
        break;
      default:
        if (p.variant != Variant::classical) r.return_from_isolation += 1.0;
        break;
    }
  }
  return r;
}

// All labeled simple graphs on n vertices (edge subsets of the complete
// graph).
inline std::vector<isovig::Graph> all_labeled_graphs(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::vector<isovig::Graph> out;
  const std::uint32_t masks = 1u << slots.size();
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask & (1u << i)) edges.push_back(slots[i]);
    out.push_back(isovig::graph_from_edges(n, edges));
  }
  return out;
}

// All state vectors over {-1, 0, 1}^n.
inline std::vector<std::vector<std::int8_t>> all_states(std::uint32_t n) {
  std::vector<std::vector<std::int8_t>> out;
  std::vector<std::int8_t> cur(n, -1);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < n; ++i) count *= 3;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < n; ++i) {
      cur[i] = static_cast<std::int8_t>(static_cast<int>(c % 3) - 1);
      c /= 3;
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace oracle
