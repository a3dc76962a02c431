#pragma once

// Graphical construction: pre-sampled Poisson event streams (marks) shared by
// several processes, deterministic replay, and the containment checks built
// on top of it.
//
// Streams per mark set:
//   arrows   one Poisson(lambda) stream per directed edge; an arrow u->v
//            infects v when u is infected and v is healthy
//   dots     one Poisson(1) stream per vertex; a dot returns an infected or
//            isolated vertex to healthy
//   crosses  one Poisson(alpha) stream per vertex; classical ignores them,
//            the isolation variant removes an infected vertex, the comparison
//            variant removes a healthy or infected vertex
//
// Replay order is (time, stream id, index within stream); stream ids are
// directed edges first, then dots, then crosses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isovig/dynamics.hpp"
#include "isovig/graph.hpp"

#include "json.hpp"

namespace isovig::coupling {

struct MarkSet {
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> arrows;   // by directed edge index
  std::vector<std::vector<double>> dots;     // by vertex
  std::vector<std::vector<double>> crosses;  // by vertex
};

MarkSet generate_marks(const Graph& g, double lambda, double alpha, double horizon,
                       std::uint64_t seed);

// Throws on any stream that is not strictly increasing inside (0, horizon].
void validate_marks(const Graph& g, const MarkSet& marks);

// Deterministic replay of the marks under one variant's reaction rules.
dynamics::Trajectory realize(const Graph& g, const MarkSet& marks, dynamics::Variant variant,
                             const std::vector<std::int8_t>& init);

struct ContainmentViolation {
  double t = 0.0;
  std::uint32_t vertex = 0;
};

// Replays two processes on the same marks and reports the first moment where
// the infected set of (variant_a, init_a) is not contained in the infected
// set of (variant_b, init_b).  The initial configurations are checked too.
std::optional<ContainmentViolation> first_containment_violation(
    const Graph& g, const MarkSet& marks, dynamics::Variant variant_a,
    const std::vector<std::int8_t>& init_a, dynamics::Variant variant_b,
    const std::vector<std::int8_t>& init_b);

// Comparison-versus-isolation domination on shared marks from a shared
// initial configuration.  Empty result means containment held throughout.
std::optional<ContainmentViolation> check_domination(const Graph& g, const MarkSet& marks,
                                                     const std::vector<std::int8_t>& init);

struct AttractivenessViolation {
  std::uint64_t trial = 0;
  double t = 0.0;
  std::uint32_t vertex = 0;
  std::vector<std::uint32_t> init_a;  // infected sets, a strictly inside b
  std::vector<std::uint32_t> init_b;
};

// Random search for a monotonicity breach: nested initial infected sets
// realized on shared marks.  When the graph is the 4-path and
// `include_seeded_trial` is set, trial 0 replays a known counterexample
// layout instead of random marks.  `nullopt` reports that no violation was
// found, not that none exists.
std::optional<AttractivenessViolation> search_attractiveness_violation(
    const Graph& g, dynamics::Variant variant, double lambda, double alpha, double horizon,
    std::uint64_t trials, std::uint64_t seed, bool include_seeded_trial = true);

// Hand-laid mark sets on the 4-path (vertices 0-1-2-3, horizon 8) used as
// regression fixtures.  The first drives a classical spread where vertex 3
// stays healthy; the second differs only in dots/crosses and breaks
// monotonicity of the isolation variant for inits {0} versus {0,1}.
MarkSet p4_reference_marks();
MarkSet p4_counterexample_marks();

bool is_path4(const Graph& g);

nlohmann::json marks_to_json(const Graph& g, const MarkSet& marks);
MarkSet marks_from_json(const Graph& g, const nlohmann::json& j);
void write_marks(const Graph& g, const MarkSet& marks, const std::string& path);
MarkSet read_marks(const Graph& g, const std::string& path);

}  // namespace isovig::coupling
