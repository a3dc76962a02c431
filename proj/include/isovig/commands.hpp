#pragma once

// Subcommand implementations behind the command-line binary.  Each takes a
// fully merged JSON config (file values overlaid with flags) and writes its
// outputs under config["out"].  Exit codes: 0 success, 1 invariant
// violation, 2 usage or config error.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "isovig/graph.hpp"

#include "json.hpp"

namespace isovig::cli {

// Config or input problems (missing keys, bad values, unreadable files).
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A property the run was required to maintain failed to hold.
class InvariantViolation : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void cmd_generate(const nlohmann::json& config, std::ostream& log);
void cmd_simulate(const nlohmann::json& config, std::ostream& log);
void cmd_sweep(const nlohmann::json& config, std::ostream& log);
void cmd_couple(const nlohmann::json& config, std::ostream& log);
void cmd_analyze(const nlohmann::json& config, std::ostream& log);

// Dispatches to the cmd_* function and maps exceptions to exit codes.
int run_command(const std::string& name, const nlohmann::json& config, std::ostream& log,
                std::ostream& err);

// Builds a graph from a spec object ({"kind": ..., ...} or {"file": path}).
// `size_override` replaces the spec's size parameter (n, or order for
// star_of_stars).  Returns the graph and a metadata object describing it.
struct BuiltGraph {
  Graph graph;
  nlohmann::json meta;
};
BuiltGraph build_graph_spec(const nlohmann::json& spec, std::uint64_t seed,
                            std::optional<std::uint32_t> size_override = std::nullopt);

}  // namespace isovig::cli
