// Command-line front end: merges a JSON config file with flag overrides and
// dispatches to the subcommand implementations.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "isovig/commands.hpp"
#include "isovig/ioutil.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> log_mode;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--seed", o.seed, "master seed (overrides config)");
  cmd->add_option("--out", o.out, "output directory (overrides config)");
  cmd->add_option("--threads", o.threads, "worker threads, 0 = auto (overrides config)");
  cmd->add_option("--log-mode", o.log_mode, "full or thinned (overrides config)");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw isovig::cli::UsageError("cannot open config: " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw isovig::cli::UsageError("config must be a JSON object: " + path);
  return j;
}

void apply_common(json& config, const CommonOpts& o) {
  if (o.seed) config["seed"] = *o.seed;
  if (o.out) config["out"] = *o.out;
  if (o.threads) config["threads"] = *o.threads;
  if (o.log_mode) config["log_mode"] = *o.log_mode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic epidemic dynamics on finite graphs: generation, simulation, coupling "
               "checks and scaling analysis"};
  app.set_version_flag("--version", std::string("isovig ") + isovig::kVersion);
  app.require_subcommand(1);

  CommonOpts gen_common, sim_common, sweep_common, couple_common, analyze_common;

  auto* gen = app.add_subcommand("generate", "generate a graph and write it with metadata");
  add_common(gen, gen_common);
  std::optional<std::string> gen_kind;
  std::optional<std::uint32_t> gen_n, gen_dmin, gen_dmax, gen_d, gen_m;
  std::optional<double> gen_gamma;
  std::optional<std::uint64_t> gen_extra;
  gen->add_option("--kind", gen_kind, "powerlaw, regular, star_of_stars, path, cycle, complete, star");
  gen->add_option("--n", gen_n, "vertex count");
  gen->add_option("--gamma", gen_gamma, "power-law exponent (must exceed 2)");
  gen->add_option("--d-min", gen_dmin, "minimum degree");
  gen->add_option("--d-max", gen_dmax, "degree truncation bound");
  gen->add_option("--d", gen_d, "degree for regular graphs");
  gen->add_option("--m", gen_m, "order for star_of_stars");
  gen->add_option("--extra-leaf-edges", gen_extra, "extra random edges among leaves");

  auto* sim = app.add_subcommand("simulate", "run one trajectory and export it");
  add_common(sim, sim_common);
  std::optional<std::string> sim_variant, sim_graph_file;
  std::optional<double> sim_lambda, sim_alpha, sim_tcap;
  sim->add_option("--variant", sim_variant, "classical, isolation, vigilance or comparison");
  sim->add_option("--lambda", sim_lambda, "infection rate");
  sim->add_option("--alpha", sim_alpha, "isolation rate");
  sim->add_option("--t-cap", sim_tcap, "censoring time");
  sim->add_option("--graph-file", sim_graph_file, "edge-list file to simulate on");

  auto* sweep = app.add_subcommand("sweep", "replicate runs over a size and lambda grid");
  add_common(sweep, sweep_common);
  std::optional<std::uint32_t> sweep_reps;
  sweep->add_option("--replicates", sweep_reps, "replicates per grid cell");

  auto* couple = app.add_subcommand("couple", "shared-marks domination and attractiveness checks");
  add_common(couple, couple_common);
  std::optional<std::uint64_t> couple_reals, couple_trials;
  std::optional<double> couple_lambda, couple_alpha, couple_horizon;
  bool couple_self_test = false;
  couple->add_option("--realizations", couple_reals, "coupled realizations per graph");
  couple->add_option("--trials", couple_trials, "attractiveness search trials");
  couple->add_option("--lambda", couple_lambda, "infection rate");
  couple->add_option("--alpha", couple_alpha, "isolation rate");
  couple->add_option("--horizon", couple_horizon, "mark horizon");
  couple->add_flag("--self-test", couple_self_test,
                   "swap the rule pair; the detector must report a breach and exit 1");

  auto* analyze = app.add_subcommand("analyze", "fit scaling of extinction times from sweep output");
  add_common(analyze, analyze_common);
  std::optional<std::string> analyze_results;
  analyze->add_option("--results", analyze_results, "results.csv or sweep output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string name;
    CommonOpts* common = nullptr;
    if (gen->parsed()) {
      name = "generate";
      common = &gen_common;
    } else if (sim->parsed()) {
      name = "simulate";
      common = &sim_common;
    } else if (sweep->parsed()) {
      name = "sweep";
      common = &sweep_common;
    } else if (couple->parsed()) {
      name = "couple";
      common = &couple_common;
    } else {
      name = analyze->parsed() ? "analyze" : "";
      common = &analyze_common;
    }
    if (name.empty()) {
      std::cerr << "error: no subcommand\n";
      return 2;
    }

    json config = load_config(common->config_path);
    apply_common(config, *common);

    if (gen->parsed()) {
      if (!config.contains("graph")) config["graph"] = json::object();
      if (gen_kind) config["graph"]["kind"] = *gen_kind;
      if (gen_n) config["graph"]["n"] = *gen_n;
      if (gen_gamma) config["graph"]["gamma"] = *gen_gamma;
      if (gen_dmin) config["graph"]["d_min"] = *gen_dmin;
      if (gen_dmax) config["graph"]["d_max"] = *gen_dmax;
      if (gen_d) config["graph"]["d"] = *gen_d;
      if (gen_m) config["graph"]["m"] = *gen_m;
      if (gen_extra) config["graph"]["extra_leaf_edges"] = *gen_extra;
    } else if (sim->parsed()) {
      if (sim_graph_file) config["graph"] = json{{"file", *sim_graph_file}};
      if (sim_variant) config["variant"] = *sim_variant;
      if (sim_lambda) config["lambda"] = *sim_lambda;
      if (sim_alpha) config["alpha"] = *sim_alpha;
      if (sim_tcap) config["t_cap"] = *sim_tcap;
    } else if (sweep->parsed()) {
      if (sweep_reps) config["replicates"] = *sweep_reps;
    } else if (couple->parsed()) {
      if (couple_reals) config["realizations"] = *couple_reals;
      if (couple_lambda) config["lambda"] = *couple_lambda;
      if (couple_alpha) config["alpha"] = *couple_alpha;
      if (couple_horizon) config["horizon"] = *couple_horizon;
      if (couple_self_test) config["self_test"] = true;
      if (couple_trials) {
        if (!config.contains("search")) config["search"] = json::object();
        config["search"]["trials"] = *couple_trials;
      }
    } else if (analyze->parsed()) {
      if (analyze_results) config["results"] = *analyze_results;
    }

    return isovig::cli::run_command(name, config, std::cout, std::cerr);
  } catch (const isovig::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
