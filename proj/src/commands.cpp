#include "isovig/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "isovig/coupling.hpp"
#include "isovig/dynamics.hpp"
#include "isovig/ioutil.hpp"
#include "isovig/netgen.hpp"
#include "isovig/observables.hpp"
#include "isovig/rng.hpp"

namespace isovig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json header(const json& config) {
  json j;
  j["version"] = kVersion;
  j["config"] = config;
  return j;
}

std::string out_dir(const json& config) {
  if (!config.contains("out") || !config.at("out").is_string())
    throw UsageError("config needs an output directory (\"out\")");
  const std::string dir = config.at("out").get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory: " + dir);
  return dir;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open for writing: " + path);
  return f;
}

void write_json_file(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
  if (!f) throw UsageError("write failed: " + path);
}

std::uint64_t seed_of(const json& config) { return config.value("seed", std::uint64_t{0}); }

unsigned thread_count(const json& config, std::size_t jobs) {
  unsigned t = config.value("threads", 0u);
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::int8_t> parse_init(const json& config, std::uint32_t n) {
  if (!config.contains("init")) return dynamics::all_infected(n);
  const json& init = config.at("init");
  if (init.is_string()) {
    const std::string s = init.get<std::string>();
    if (s == "all_infected") return dynamics::all_infected(n);
    if (s == "all_healthy") return std::vector<std::int8_t>(n, 0);
    throw UsageError("unknown init: " + s);
  }
  if (init.is_object() && init.contains("infected")) {
    std::vector<std::int8_t> out(n, 0);
    for (const auto& v : init.at("infected")) {
      const std::uint64_t id = v.get<std::uint64_t>();
      if (id >= n) throw UsageError("init vertex out of range");
      out[id] = 1;
    }
    return out;
  }
  if (init.is_object() && init.contains("states")) {
    const auto& arr = init.at("states");
    if (arr.size() != n) throw UsageError("init states must list every vertex");
    std::vector<std::int8_t> out;
    out.reserve(n);
    for (const auto& v : arr) {
      const int s = v.get<int>();
      if (s < -1 || s > 1) throw UsageError("init states must be -1, 0 or 1");
      out.push_back(static_cast<std::int8_t>(s));
    }
    return out;
  }
  throw UsageError("init must be a mode string, {\"infected\": [...]} or {\"states\": [...]}");
}

json trajectory_summary(const dynamics::Trajectory& tr, const json& config) {
  json j = header(config);
  j["n"] = tr.n;
  j["seed"] = tr.seed;
  j["t_cap"] = tr.t_cap;
  j["event_count"] = tr.event_count;
  j["censored"] = tr.censored;
  if (tr.censored)
    j["extinction_time"] = nullptr;
  else
    j["extinction_time"] = tr.extinction_time;
  j["t_end"] = tr.t_end;
  j["final_infected"] = tr.final_infected;
  j["final_isolated"] = tr.final_isolated;
  return j;
}

}  // namespace

BuiltGraph build_graph_spec(const nlohmann::json& spec, std::uint64_t seed,
                            std::optional<std::uint32_t> size_override) {
  if (!spec.is_object()) throw UsageError("graph spec must be an object");
  BuiltGraph out;
  try {
    if (spec.contains("file")) {
      const std::string path = spec.at("file").get<std::string>();
      out.graph = read_edge_list(path);
      out.meta = {{"kind", "file"}, {"path", path}, {"n", out.graph.n},
                  {"edges", out.graph.edge_count()}};
      return out;
    }
    const std::string kind = spec.value("kind", "");
    if (kind.empty()) throw UsageError("graph spec needs \"kind\" or \"file\"");
    const std::uint64_t g_seed = spec.value("seed", seed);
    const auto size = [&](const char* key) -> std::uint32_t {
      if (size_override) return *size_override;
      return spec.at(key).get<std::uint32_t>();
    };

    if (kind == "powerlaw") {
      const std::uint32_t n = size("n");
      const double gamma = spec.at("gamma").get<double>();
      const std::uint32_t d_min = spec.value("d_min", 3u);
      const std::uint32_t d_max = spec.value("d_max", n > 0 ? n - 1 : 1u);
      const auto ds = netgen::sample_power_law_degrees(n, gamma, d_min, d_max, g_seed);
      auto cm = netgen::build_configuration_model(ds.degrees, mix_seed(g_seed, 1));
      std::uint64_t deficit_total = 0;
      for (auto d : cm.deficits) deficit_total += d;
      out.meta = {{"kind", "powerlaw"},
                  {"n", n},
                  {"gamma", gamma},
                  {"d_min", d_min},
                  {"d_max", d_max},
                  {"seed", g_seed},
                  {"parity_adjusted", ds.parity_adjusted},
                  {"deficit_total", deficit_total},
                  {"deficits", cm.deficits},
                  {"edges", cm.graph.edge_count()}};
      if (ds.parity_adjusted) out.meta["parity_vertex"] = ds.parity_vertex;
      out.graph = std::move(cm.graph);
      return out;
    }
    if (kind == "regular") {
      const std::uint32_t n = size("n");
      const std::uint32_t d = spec.at("d").get<std::uint32_t>();
      out.graph = netgen::sample_regular_graph(n, d, g_seed);
      out.meta = {{"kind", "regular"}, {"n", n}, {"d", d}, {"seed", g_seed},
                  {"edges", out.graph.edge_count()}};
      return out;
    }
    if (kind == "star_of_stars") {
      const std::uint32_t m = size_override ? *size_override : spec.at("m").get<std::uint32_t>();
      out.graph = make_star_of_stars(m);
      const std::uint64_t extra = spec.value("extra_leaf_edges", std::uint64_t{0});
      if (extra > 0) {
        Rng rng(g_seed);
        const std::uint32_t first_leaf = m + 1;
        const std::uint32_t leaf_count = m * m;
        std::uint64_t added = 0, attempts = 0;
        while (added < extra && attempts < extra * 100 + 1000) {
          ++attempts;
          const std::uint32_t a = first_leaf + static_cast<std::uint32_t>(rng.below(leaf_count));
          const std::uint32_t b = first_leaf + static_cast<std::uint32_t>(rng.below(leaf_count));
          if (a == b || out.graph.has_edge(a, b)) continue;
          out.graph.adj[a].push_back(b);
          out.graph.adj[b].push_back(a);
          out.graph.finalize();
          ++added;
        }
        if (added < extra) throw UsageError("could not place the requested extra leaf edges");
      }
      out.meta = {{"kind", "star_of_stars"}, {"m", m}, {"n", out.graph.n},
                  {"extra_leaf_edges", extra}, {"seed", g_seed},
                  {"edges", out.graph.edge_count()}};
      return out;
    }
    if (kind == "path" || kind == "cycle" || kind == "complete" || kind == "star") {
      const std::uint32_t n = size("n");
      if (kind == "path") out.graph = make_path(n);
      if (kind == "cycle") out.graph = make_cycle(n);
      if (kind == "complete") out.graph = make_complete(n);
      if (kind == "star") out.graph = make_star(n);
      out.meta = {{"kind", kind}, {"n", out.graph.n}, {"edges", out.graph.edge_count()}};
      return out;
    }
    throw UsageError("unknown graph kind: " + kind);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad graph spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("bad graph spec: ") + e.what());
  }
}

void cmd_generate(const json& config, std::ostream& log) {
  if (!config.contains("graph")) throw UsageError("generate: config needs \"graph\"");
  const std::string dir = out_dir(config);
  auto built = build_graph_spec(config.at("graph"), seed_of(config));

  const std::string edge_path = dir + "/graph.edges";
  write_edge_list(built.graph, edge_path);
  json meta = header(config);
  meta["graph"] = built.meta;
  write_json_file(dir + "/graph.meta.json", meta);
  log << "wrote " << edge_path << " (" << built.graph.n << " vertices, "
      << built.graph.edge_count() << " edges)\n";
}

void cmd_simulate(const json& config, std::ostream& log) {
  if (!config.contains("graph")) throw UsageError("simulate: config needs \"graph\"");
  const std::string dir = out_dir(config);
  const std::uint64_t master = seed_of(config);
  auto built = build_graph_spec(config.at("graph"), mix_seed(master, 0));

  dynamics::ModelParams params;
  try {
    params.variant = dynamics::variant_from_name(config.value("variant", "classical"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  params.lambda = config.value("lambda", 1.0);
  params.alpha = config.value("alpha", 0.0);
  const double t_cap = config.value("t_cap", 100.0);
  const std::string mode = config.value("log_mode", "full");
  if (mode != "full" && mode != "thinned") throw UsageError("log_mode must be full or thinned");

  const auto init = parse_init(config, built.graph.n);
  const auto level =
      mode == "full" ? dynamics::RecordLevel::full : dynamics::RecordLevel::series;
  dynamics::Trajectory tr;
  try {
    tr = dynamics::run(built.graph, init, params, t_cap, mix_seed(master, 1), level);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  json summary = trajectory_summary(tr, config);
  summary["graph"] = built.meta;
  write_json_file(dir + "/summary.json", summary);

  if (mode == "full") {
    auto f = open_out(dir + "/trajectory.jsonl");
    for (const auto& ev : tr.events) {
      json line;
      line["t"] = ev.t;
      line["v"] = ev.v;
      line["from"] = ev.from;
      line["to"] = ev.to;
      f << line.dump() << '\n';
    }
    summary["type"] = "summary";
    f << summary.dump() << '\n';
    if (!f) throw UsageError("write failed: trajectory.jsonl");
  } else {
    auto f = open_out(dir + "/series.csv");
    f << "# " << header(config).dump() << '\n';
    f << "t,infected,isolated\n";
    for (const auto& pt : tr.series)
      f << format_double(pt.t) << ',' << pt.infected << ',' << pt.isolated << '\n';
    if (!f) throw UsageError("write failed: series.csv");
  }
  log << "simulated " << tr.event_count << " events, "
      << (tr.censored ? "censored" : "extinct") << " at t=" << format_double(tr.t_end) << '\n';
}

namespace {

struct SweepRow {
  std::uint32_t n = 0;
  double lambda = 0.0;
  std::uint32_t replicate = 0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  bool censored = false;
  std::uint64_t events = 0;
  std::uint32_t final_infected = 0;
  std::uint32_t final_isolated = 0;
};

}  // namespace

void cmd_sweep(const json& config, std::ostream& log) {
  if (!config.contains("graph")) throw UsageError("sweep: config needs \"graph\"");
  const json& gspec = config.at("graph");
  if (!gspec.contains("sizes") || !gspec.at("sizes").is_array() || gspec.at("sizes").empty())
    throw UsageError("sweep: graph spec needs a nonempty \"sizes\" array");
  if (!config.contains("lambda_grid") || !config.at("lambda_grid").is_array() ||
      config.at("lambda_grid").empty())
    throw UsageError("sweep: config needs a nonempty \"lambda_grid\"");

  std::vector<std::uint32_t> sizes;
  for (const auto& s : gspec.at("sizes")) sizes.push_back(s.get<std::uint32_t>());
  std::vector<double> lambdas;
  for (const auto& l : config.at("lambda_grid")) lambdas.push_back(l.get<double>());
  const double alpha = config.value("alpha", 0.0);
  const std::uint32_t replicates = config.value("replicates", 0u);
  if (replicates == 0) throw UsageError("sweep: replicates must be positive");
  dynamics::ModelParams base;
  try {
    base.variant = dynamics::variant_from_name(config.value("variant", "classical"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  base.alpha = alpha;

  const bool has_cap = config.contains("t_cap");
  const bool has_factor = config.contains("t_cap_factor");
  if (has_cap == has_factor)
    throw UsageError("sweep: set exactly one of t_cap, t_cap_factor");
  const double cap_value = has_cap ? config.at("t_cap").get<double>() : 0.0;
  const double cap_factor = has_factor ? config.at("t_cap_factor").get<double>() : 0.0;

  const std::string dir = out_dir(config);
  const std::uint64_t master = seed_of(config);

  // One graph per size, shared read-only by every lambda and replicate.
  std::vector<Graph> graphs(sizes.size());
  json graph_meta = json::array();
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    auto built =
        build_graph_spec(gspec, mix_seed(master, 0x100000000ull + si), sizes[si]);
    graphs[si] = std::move(built.graph);
    graph_meta.push_back(built.meta);
  }

  const std::size_t jobs = sizes.size() * lambdas.size() * replicates;
  std::vector<SweepRow> rows(jobs);
  parallel_for(jobs, thread_count(config, jobs), [&](std::size_t job) {
    const std::size_t si = job / (lambdas.size() * replicates);
    const std::size_t rest = job % (lambdas.size() * replicates);
    const std::size_t li = rest / replicates;
    const std::uint32_t rep = static_cast<std::uint32_t>(rest % replicates);
    const Graph& g = graphs[si];
    dynamics::ModelParams params = base;
    params.lambda = lambdas[li];
    const double t_cap = has_cap ? cap_value : cap_factor * static_cast<double>(g.n);
    const std::uint64_t run_seed = mix_seed(master, job);
    const auto tr = dynamics::run(g, dynamics::all_infected(g.n), params, t_cap, run_seed,
                                  dynamics::RecordLevel::summary);
    SweepRow& row = rows[job];
    row.n = g.n;
    row.lambda = lambdas[li];
    row.replicate = rep;
    row.seed = run_seed;
    row.tau = tr.t_end;
    row.censored = tr.censored;
    row.events = tr.event_count;
    row.final_infected = tr.final_infected;
    row.final_isolated = tr.final_isolated;
  });

  write_json_file(dir + "/config.json", header(config));
  {
    auto f = open_out(dir + "/results.csv");
    f << "# " << header(config).dump() << '\n';
    f << "n,lambda,replicate,seed,tau,censored,events,final_infected,final_isolated\n";
    for (const auto& r : rows)
      f << r.n << ',' << format_double(r.lambda) << ',' << r.replicate << ',' << r.seed << ','
        << format_double(r.tau) << ',' << (r.censored ? 1 : 0) << ',' << r.events << ','
        << r.final_infected << ',' << r.final_isolated << '\n';
    if (!f) throw UsageError("write failed: results.csv");
  }
  {
    auto f = open_out(dir + "/results.jsonl");
    json head = header(config);
    head["type"] = "header";
    f << head.dump() << '\n';
    for (const auto& r : rows) {
      json line;
      line["n"] = r.n;
      line["lambda"] = r.lambda;
      line["replicate"] = r.replicate;
      line["seed"] = r.seed;
      line["tau"] = r.tau;
      line["censored"] = r.censored;
      line["events"] = r.events;
      line["final_infected"] = r.final_infected;
      line["final_isolated"] = r.final_isolated;
      f << line.dump() << '\n';
    }
    if (!f) throw UsageError("write failed: results.jsonl");
  }
  std::size_t censored = 0;
  for (const auto& r : rows) censored += r.censored ? 1 : 0;
  log << "sweep finished: " << jobs << " runs, " << censored << " censored\n";
}

void cmd_couple(const json& config, std::ostream& log) {
  const double lambda = config.value("lambda", 1.0);
  const double alpha = config.value("alpha", 1.0);
  const double horizon = config.value("horizon", 20.0);
  const std::uint64_t realizations = config.value("realizations", std::uint64_t{1000});
  const bool self_test = config.value("self_test", false);
  const std::uint64_t master = seed_of(config);

  std::vector<json> suite_specs;
  if (config.contains("suite")) {
    for (const auto& s : config.at("suite")) suite_specs.push_back(s);
  } else {
    suite_specs = {{{"kind", "path"}, {"n", 4}},
                   {{"kind", "cycle"}, {"n", 5}},
                   {{"kind", "star"}, {"n", 10}}};
  }

  json report = header(config);
  report["mode"] = self_test ? "self_test" : "domination";
  report["graphs"] = json::array();
  std::optional<std::string> breach;

  std::uint64_t stream = 0;
  for (const auto& spec : suite_specs) {
    auto built = build_graph_spec(spec, mix_seed(master, 0x200000000ull + stream));
    const Graph& g = built.graph;
    json entry;
    entry["graph"] = built.meta;
    entry["realizations"] = realizations;
    json violations = json::array();
    for (std::uint64_t r = 0; r < realizations && !breach; ++r) {
      const std::uint64_t mark_seed = mix_seed(master, 2 * stream * realizations + 2 * r);
      const auto marks = coupling::generate_marks(g, lambda, alpha, horizon, mark_seed);
      std::vector<std::int8_t> init;
      if (r % 2 == 0) {
        init = dynamics::all_infected(g.n);
      } else {
        Rng rng(mix_seed(master, 2 * stream * realizations + 2 * r + 1));
        init.resize(g.n);
        for (std::uint32_t v = 0; v < g.n; ++v) {
          const auto u = rng.below(3);
          init[v] = u == 0 ? std::int8_t{-1} : (u == 1 ? std::int8_t{0} : std::int8_t{1});
        }
      }
      std::optional<coupling::ContainmentViolation> v;
      if (self_test) {
        // Deliberately swapped pair: isolation is not contained in
        // comparison, so this must trip and prove the detector works.
        v = coupling::first_containment_violation(g, marks, dynamics::Variant::isolation, init,
                                                  dynamics::Variant::comparison, init);
      } else {
        v = coupling::check_domination(g, marks, init);
      }
      if (v) {
        json vj;
        vj["replicate"] = r;
        vj["t"] = v->t;
        vj["vertex"] = v->vertex;
        vj["mark_seed"] = mark_seed;
        violations.push_back(vj);
        std::ostringstream msg;
        msg << (self_test ? "self-test containment breach (expected)" : "domination violated")
            << " on " << built.meta.value("kind", "graph") << " at t=" << format_double(v->t)
            << " vertex " << v->vertex;
        breach = msg.str();
      }
    }
    entry["violations"] = violations;
    report["graphs"].push_back(entry);
    ++stream;
  }

  if (!breach) {
    const json search_cfg = config.value("search", json::object());
    {
      json sj;
      const json sg_spec = search_cfg.value("graph", json{{"kind", "path"}, {"n", 4}});
      auto built = build_graph_spec(sg_spec, mix_seed(master, 0x300000000ull));
      dynamics::Variant var;
      try {
        var = dynamics::variant_from_name(search_cfg.value("variant", "isolation"));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const double s_lambda = search_cfg.value("lambda", lambda);
      const double s_alpha = search_cfg.value("alpha", alpha);
      const double s_horizon = search_cfg.value("horizon", 8.0);
      const std::uint64_t trials = search_cfg.value("trials", std::uint64_t{10000});
      const bool seeded = search_cfg.value("seeded_trial", true);
      const auto found = coupling::search_attractiveness_violation(
          built.graph, var, s_lambda, s_alpha, s_horizon, trials, mix_seed(master, 0x300000001ull),
          seeded);
      sj["graph"] = built.meta;
      sj["variant"] = dynamics::variant_name(var);
      sj["trials"] = trials;
      if (found) {
        sj["violation"] = {{"trial", found->trial},
                           {"t", found->t},
                           {"vertex", found->vertex},
                           {"init_a", found->init_a},
                           {"init_b", found->init_b}};
      } else {
        sj["violation"] = nullptr;
      }
      report["search"] = sj;
    }
  }

  if (config.contains("out")) {
    const std::string dir = out_dir(config);
    write_json_file(dir + "/couple_report.json", report);
  }

  if (breach) throw InvariantViolation(*breach);
  log << "domination clean over " << suite_specs.size() << " graphs x " << realizations
      << " realizations";
  if (report.contains("search")) {
    log << "; attractiveness search "
        << (report["search"]["violation"].is_null() ? "found no violation" : "found a violation");
  }
  log << '\n';
}

namespace {

struct ResultRow {
  std::uint32_t n;
  std::string lambda_key;
  double tau;
  bool censored;
};

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open results: " + path);
  std::vector<ResultRow> rows;
  std::string line;
  bool header_seen = false;
  std::size_t col_n = 0, col_lambda = 1, col_tau = 4, col_censored = 5;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "n") col_n = i;
        if (fields[i] == "lambda") col_lambda = i;
        if (fields[i] == "tau") col_tau = i;
        if (fields[i] == "censored") col_censored = i;
      }
      continue;
    }
    if (fields.size() <= std::max({col_n, col_lambda, col_tau, col_censored}))
      throw UsageError("malformed results row: " + line);
    ResultRow r;
    r.n = static_cast<std::uint32_t>(std::stoul(fields[col_n]));
    r.lambda_key = fields[col_lambda];
    r.tau = std::stod(fields[col_tau]);
    r.censored = fields[col_censored] == "1" || fields[col_censored] == "true";
    rows.push_back(r);
  }
  if (!header_seen) throw UsageError("results file has no header: " + path);
  return rows;
}

}  // namespace

void cmd_analyze(const json& config, std::ostream& log) {
  if (!config.contains("results")) throw UsageError("analyze: config needs \"results\"");
  std::string path = config.at("results").get<std::string>();
  if (fs::is_directory(path)) path += "/results.csv";
  const auto rows = read_results_csv(path);
  if (rows.empty()) throw UsageError("analyze: no data rows in " + path);
  const std::string dir = out_dir(config);

  // Group by the lambda column's exact text, then by size.
  std::map<std::string, std::map<std::uint32_t, observables::FitSeries>> groups;
  for (const auto& r : rows) {
    auto& series = groups[r.lambda_key][r.n];
    series.n = r.n;
    series.samples.push_back({r.tau, r.censored});
  }

  json per_lambda = json::array();
  json plot_rows = json::array();
  for (const auto& [lambda_key, by_n] : groups) {
    std::vector<observables::FitSeries> table;
    for (const auto& [n, series] : by_n) table.push_back(series);
    json entry;
    entry["lambda"] = std::stod(lambda_key);
    for (const auto& series : table) {
      std::size_t censored = 0;
      for (const auto& s : series.samples) censored += s.censored ? 1 : 0;
      json pr;
      pr["lambda"] = std::stod(lambda_key);
      pr["n"] = series.n;
      std::vector<double> vals;
      for (const auto& s : series.samples) vals.push_back(s.value);
      std::sort(vals.begin(), vals.end());
      const std::size_t k = vals.size();
      pr["median_tau"] = k % 2 == 1 ? vals[k / 2] : 0.5 * (vals[k / 2 - 1] + vals[k / 2]);
      pr["censored_fraction"] =
          static_cast<double>(censored) / static_cast<double>(series.samples.size());
      pr["samples"] = series.samples.size();
      plot_rows.push_back(pr);
    }
    try {
      const auto fit = observables::fit_scaling(table);
      switch (fit.classification) {
        case observables::ScalingClass::linear_ish: entry["classification"] = "linear-ish"; break;
        case observables::ScalingClass::exponential_ish:
          entry["classification"] = "exponential-ish";
          break;
        default: entry["classification"] = "indeterminate"; break;
      }
      entry["linear_slope"] = fit.linear_slope;
      entry["linear_rms_log_err"] = fit.linear_rms_log_err;
      entry["exp_rate"] = fit.exp_rate;
      entry["exp_intercept"] = fit.exp_intercept;
      entry["exp_rms_log_err"] = fit.exp_rms_log_err;
      entry["censoring_forced"] = fit.censoring_forced;
      entry["top_censored_fraction"] = fit.top_censored_fraction;
      entry["sizes"] = fit.sizes;
      entry["medians"] = fit.medians;
    } catch (const std::invalid_argument& e) {
      entry["error"] = e.what();
    }
    per_lambda.push_back(entry);
  }

  json scaling = header(config);
  scaling["per_lambda"] = per_lambda;
  write_json_file(dir + "/scaling.json", scaling);
  {
    auto f = open_out(dir + "/scaling.csv");
    f << "# " << header(config).dump() << '\n';
    f << "lambda,n,median_tau,censored_fraction,samples\n";
    for (const auto& pr : plot_rows)
      f << format_double(pr.at("lambda").get<double>()) << ',' << pr.at("n").get<std::uint32_t>()
        << ',' << format_double(pr.at("median_tau").get<double>()) << ','
        << format_double(pr.at("censored_fraction").get<double>()) << ','
        << pr.at("samples").get<std::size_t>() << '\n';
    if (!f) throw UsageError("write failed: scaling.csv");
  }
  log << "analyzed " << rows.size() << " rows across " << groups.size() << " lambda values\n";
}

int run_command(const std::string& name, const nlohmann::json& config, std::ostream& log,
                std::ostream& err) {
  try {
    if (name == "generate")
      cmd_generate(config, log);
    else if (name == "simulate")
      cmd_simulate(config, log);
    else if (name == "sweep")
      cmd_sweep(config, log);
    else if (name == "couple")
      cmd_couple(config, log);
    else if (name == "analyze")
      cmd_analyze(config, log);
    else {
      err << "unknown command: " << name << '\n';
      return 2;
    }
    return 0;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::logic_error& e) {
    err << "invariant violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace isovig::cli
