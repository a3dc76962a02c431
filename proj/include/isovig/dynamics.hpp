#pragma once

// Continuous-time dynamics of the contact process and its variants on a
// finite graph, simulated by the direct (next-event) method.
//
// Vertex states:  0 healthy, 1 infected, -1 isolated.
//
// Transition rates per vertex:
//             infect (0->1)       recover (1->0)  isolate (->-1)       return (-1->0)
//  classical  lambda * inf nbrs   1               -                    -
//  isolation  lambda * inf nbrs   1               alpha from 1         1
//  vigilance  lambda * inf nbrs   1               alpha * healthy      1
//                                                 nbrs, from 1
//  comparison lambda * inf nbrs   1               alpha from 0 and 1   1
//
// "healthy nbrs" counts neighbours in state 0.  The comparison variant lets
// healthy vertices be removed too; that makes it attractive and dominated by
// the isolation variant on shared event streams.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isovig/graph.hpp"
#include "isovig/rng.hpp"
#include "isovig/sumtree.hpp"

namespace isovig::dynamics {

enum class Variant { classical, isolation, vigilance, comparison };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct ModelParams {
  Variant variant = Variant::classical;
  double lambda = 1.0;
  double alpha = 0.0;
};

struct RateTable {
  double infection = 0.0;
  double recovery = 0.0;
  double isolation = 0.0;
  double return_from_isolation = 0.0;
  double total() const { return infection + recovery + isolation + return_from_isolation; }
};

struct Event {
  double t = 0.0;
  std::uint32_t v = 0;
  std::int8_t from = 0;
  std::int8_t to = 0;
};

// Piecewise-constant population counts; one point per event plus the initial
// point at t = 0.
struct SeriesPoint {
  double t = 0.0;
  std::uint32_t infected = 0;
  std::uint32_t isolated = 0;
};

enum class RecordLevel { summary, series, full };

struct Trajectory {
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  double t_cap = 0.0;
  RecordLevel level = RecordLevel::full;
  std::vector<std::int8_t> initial_state;
  std::vector<Event> events;        // full level only
  std::vector<SeriesPoint> series;  // full and series levels
  std::uint64_t event_count = 0;    // counted at every level
  bool censored = false;
  double extinction_time = 0.0;     // valid when not censored
  double t_end = 0.0;               // extinction_time, or t_cap when censored
  std::uint32_t final_infected = 0;
  std::uint32_t final_isolated = 0;
};

class SystemState {
 public:
  SystemState(const Graph& g, const std::vector<std::int8_t>& init, const ModelParams& p);

  const Graph& graph() const { return *g_; }
  const ModelParams& params() const { return p_; }
  double time() const { return t_; }
  std::int8_t state(std::uint32_t v) const { return state_[v]; }
  std::uint32_t count_susceptible() const { return n_susceptible_; }
  std::uint32_t count_infected() const { return n_infected_; }
  std::uint32_t count_isolated() const { return n_isolated_; }
  std::uint64_t count_si_edges() const { return si_edges_; }
  std::uint32_t infected_neighbours(std::uint32_t v) const { return inf_nbrs_[v]; }
  std::uint32_t healthy_neighbours(std::uint32_t v) const { return healthy_nbrs_[v]; }
  double indexed_total_rate() const { return tree_.total(); }
  bool absorbed() const { return !(tree_.total() > 0.0); }

  // Advances to the next event.  Returns nothing when the chain is absorbed
  // (total rate zero).  The capped overload also returns nothing, without
  // advancing, when the next event would land past t_cap.
  std::optional<Event> step(Rng& rng);
  std::optional<Event> step(Rng& rng, double t_cap);

  // Applies one forced transition, keeping counters and rates consistent.
  void apply_transition(std::uint32_t v, std::int8_t to, double t);

  // Recomputes every counter and per-vertex rate from scratch and compares
  // with the maintained values.  Counters must match exactly, the indexed
  // total to 1e-9 relative.
  bool audit() const;

 private:
  friend struct StateProbe;  // test hook for corrupting counters

  double vertex_rate(std::uint32_t v) const;
  void refresh_vertex(std::uint32_t v);

  const Graph* g_;
  ModelParams p_;
  double t_ = 0.0;
  std::vector<std::int8_t> state_;
  std::vector<std::uint32_t> inf_nbrs_;
  std::vector<std::uint32_t> healthy_nbrs_;
  std::uint32_t n_susceptible_ = 0, n_infected_ = 0, n_isolated_ = 0;
  std::uint64_t si_edges_ = 0;
  SumTree tree_;
};

// Aggregate rates by event class, from the maintained counters.
RateTable total_rates(const SystemState& st, const ModelParams& p);

// Runs the chain from `init` until the infected set empties or the next event
// would land past t_cap.  Extinction time is the first moment with no
// infected vertices.
Trajectory run(const Graph& g, const std::vector<std::int8_t>& init, const ModelParams& p,
               double t_cap, std::uint64_t seed, RecordLevel level = RecordLevel::full);

std::vector<std::int8_t> all_infected(std::uint32_t n);

}  // namespace isovig::dynamics
