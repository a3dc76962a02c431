#include "isovig/coupling.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "isovig/ioutil.hpp"

namespace isovig::coupling {

using dynamics::Trajectory;
using dynamics::Variant;

MarkSet generate_marks(const Graph& g, double lambda, double alpha, double horizon,
                       std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("generate_marks: horizon must be positive");
  if (lambda < 0.0 || alpha < 0.0) throw std::invalid_argument("generate_marks: negative rate");
  MarkSet ms;
  ms.horizon = horizon;
  ms.seed = seed;
  ms.arrows.assign(g.directed_edge_count(), {});
  ms.dots.assign(g.n, {});
  ms.crosses.assign(g.n, {});
  Rng rng(seed);
  const auto fill = [&](std::vector<double>& stream, double rate) {
    if (!(rate > 0.0)) return;
    double t = 0.0;
    for (;;) {
      t += rng.exponential(rate);
      if (t > horizon) break;
      stream.push_back(t);
    }
  };
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::size_t k = 0; k < g.adj[u].size(); ++k)
      fill(ms.arrows[g.directed_edge_index(u, k)], lambda);
  for (std::uint32_t v = 0; v < g.n; ++v) fill(ms.dots[v], 1.0);
  for (std::uint32_t v = 0; v < g.n; ++v) fill(ms.crosses[v], alpha);
  return ms;
}

void validate_marks(const Graph& g, const MarkSet& marks) {
  if (!(marks.horizon > 0.0)) throw std::invalid_argument("marks: horizon must be positive");
  if (marks.arrows.size() != g.directed_edge_count() || marks.dots.size() != g.n ||
      marks.crosses.size() != g.n)
    throw std::invalid_argument("marks: stream count does not match the graph");
  const auto check = [&](const std::vector<double>& stream) {
    double prev = 0.0;
    for (double t : stream) {
      if (!(t > prev) || t > marks.horizon)
        throw std::invalid_argument("marks: stream not strictly increasing within the horizon");
      prev = t;
    }
  };
  for (const auto& s : marks.arrows) check(s);
  for (const auto& s : marks.dots) check(s);
  for (const auto& s : marks.crosses) check(s);
}

namespace {

enum class MarkKind : std::uint8_t { arrow, dot, cross };

struct FlatMark {
  double t;
  std::size_t stream;
  MarkKind kind;
  std::uint32_t src;  // arrow source (unused otherwise)
  std::uint32_t dst;  // target vertex
};

std::vector<FlatMark> flatten(const Graph& g, const MarkSet& marks) {
  validate_marks(g, marks);
  std::vector<FlatMark> flat;
  std::size_t total = 0;
  for (const auto& s : marks.arrows) total += s.size();
  for (const auto& s : marks.dots) total += s.size();
  for (const auto& s : marks.crosses) total += s.size();
  flat.reserve(total);
  const std::size_t m2 = g.directed_edge_count();
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::size_t k = 0; k < g.adj[u].size(); ++k) {
      const std::size_t e = g.directed_edge_index(u, k);
      for (double t : marks.arrows[e]) flat.push_back({t, e, MarkKind::arrow, u, g.adj[u][k]});
    }
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (double t : marks.dots[v]) flat.push_back({t, m2 + v, MarkKind::dot, v, v});
  for (std::uint32_t v = 0; v < g.n; ++v)
    for (double t : marks.crosses[v]) flat.push_back({t, m2 + g.n + v, MarkKind::cross, v, v});
  std::stable_sort(flat.begin(), flat.end(), [](const FlatMark& a, const FlatMark& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.stream < b.stream;
  });
  return flat;
}

// The state the mark's target vertex moves to, or the current state when the
// mark has no effect.
std::int8_t reaction(Variant var, const FlatMark& mk, const std::vector<std::int8_t>& s) {
  const std::int8_t cur = s[mk.dst];
  switch (mk.kind) {
    case MarkKind::arrow:
      return (s[mk.src] == 1 && cur == 0) ? std::int8_t{1} : cur;
    case MarkKind::dot:
      if (cur == 1) return 0;
      if (cur == -1 && var != Variant::classical) return 0;
      return cur;
    case MarkKind::cross:
      switch (var) {
        case Variant::classical: return cur;
        case Variant::isolation: return cur == 1 ? std::int8_t{-1} : cur;
        case Variant::comparison: return (cur == 0 || cur == 1) ? std::int8_t{-1} : cur;
        default: throw std::invalid_argument("realize: no mark rules for this variant");
      }
  }
  return cur;
}

void check_init(const Graph& g, const std::vector<std::int8_t>& init) {
  if (init.size() != g.n) throw std::invalid_argument("realize: init size mismatch");
  for (std::int8_t s : init)
    if (s != -1 && s != 0 && s != 1) throw std::invalid_argument("realize: bad state value");
}

}  // namespace

Trajectory realize(const Graph& g, const MarkSet& marks, Variant variant,
                   const std::vector<std::int8_t>& init) {
  check_init(g, init);
  if (variant == Variant::vigilance)
    throw std::invalid_argument("realize: no mark rules for this variant");
  const auto flat = flatten(g, marks);

  Trajectory tr;
  tr.n = g.n;
  tr.seed = marks.seed;
  tr.t_cap = marks.horizon;
  tr.level = dynamics::RecordLevel::full;
  tr.initial_state = init;

  std::vector<std::int8_t> s = init;
  std::uint32_t infected = 0, isolated = 0;
  for (std::int8_t x : s) {
    if (x == 1) ++infected;
    if (x == -1) ++isolated;
  }
  tr.series.push_back({0.0, infected, isolated});
  bool extinct = infected == 0;
  tr.extinction_time = 0.0;

  for (const FlatMark& mk : flat) {
    const std::int8_t from = s[mk.dst];
    const std::int8_t to = reaction(variant, mk, s);
    if (to == from) continue;
    s[mk.dst] = to;
    if (from == 1) --infected;
    if (from == -1) --isolated;
    if (to == 1) ++infected;
    if (to == -1) ++isolated;
    ++tr.event_count;
    tr.events.push_back({mk.t, mk.dst, from, to});
    tr.series.push_back({mk.t, infected, isolated});
    if (!extinct && infected == 0) {
      extinct = true;
      tr.extinction_time = mk.t;
    }
  }
  tr.censored = !extinct;
  tr.t_end = extinct ? tr.extinction_time : marks.horizon;
  tr.final_infected = infected;
  tr.final_isolated = isolated;
  return tr;
}

std::optional<ContainmentViolation> first_containment_violation(
    const Graph& g, const MarkSet& marks, Variant variant_a,
    const std::vector<std::int8_t>& init_a, Variant variant_b,
    const std::vector<std::int8_t>& init_b) {
  check_init(g, init_a);
  check_init(g, init_b);
  if (variant_a == Variant::vigilance || variant_b == Variant::vigilance)
    throw std::invalid_argument("first_containment_violation: no mark rules for this variant");
  const auto flat = flatten(g, marks);

  std::vector<std::int8_t> sa = init_a, sb = init_b;
  std::size_t bad = 0;  // vertices infected in a but not in b
  for (std::uint32_t v = 0; v < g.n; ++v)
    if (sa[v] == 1 && sb[v] != 1) ++bad;
  if (bad > 0)
    for (std::uint32_t v = 0; v < g.n; ++v)
      if (sa[v] == 1 && sb[v] != 1) return ContainmentViolation{0.0, v};

  for (const FlatMark& mk : flat) {
    const std::uint32_t v = mk.dst;
    const bool was_bad = sa[v] == 1 && sb[v] != 1;
    const std::int8_t ta = reaction(variant_a, mk, sa);
    const std::int8_t tb = reaction(variant_b, mk, sb);
    sa[v] = ta;
    sb[v] = tb;
    const bool is_bad = sa[v] == 1 && sb[v] != 1;
    if (is_bad && !was_bad) ++bad;
    if (was_bad && !is_bad) --bad;
    if (bad > 0) return ContainmentViolation{mk.t, v};
  }
  return std::nullopt;
}

std::optional<ContainmentViolation> check_domination(const Graph& g, const MarkSet& marks,
                                                     const std::vector<std::int8_t>& init) {
  return first_containment_violation(g, marks, Variant::comparison, init, Variant::isolation,
                                     init);
}

namespace {

std::vector<std::int8_t> infected_set_to_init(std::uint32_t n,
                                              const std::vector<std::uint32_t>& set) {
  std::vector<std::int8_t> init(n, 0);
  for (std::uint32_t v : set) init[v] = 1;
  return init;
}

}  // namespace

std::optional<AttractivenessViolation> search_attractiveness_violation(
    const Graph& g, Variant variant, double lambda, double alpha, double horizon,
    std::uint64_t trials, std::uint64_t seed, bool include_seeded_trial) {
  const bool seeded = include_seeded_trial && is_path4(g);
  for (std::uint64_t k = 0; k < trials; ++k) {
    MarkSet marks;
    std::vector<std::uint32_t> a_set, b_set;
    if (k == 0 && seeded) {
      marks = p4_counterexample_marks();
      a_set = {0};
      b_set = {0, 1};
    } else {
      if (g.n < 2) return std::nullopt;
      marks = generate_marks(g, lambda, alpha, horizon, mix_seed(seed, 2 * k));
      Rng rng(mix_seed(seed, 2 * k + 1));
      for (int tries = 0; tries < 1000 && b_set.size() < 2; ++tries) {
        b_set.clear();
        for (std::uint32_t v = 0; v < g.n; ++v)
          if (rng.bernoulli(0.5)) b_set.push_back(v);
      }
      if (b_set.size() < 2) continue;
      for (int tries = 0; tries < 1000 && (a_set.empty() || a_set.size() == b_set.size());
           ++tries) {
        a_set.clear();
        for (std::uint32_t v : b_set)
          if (rng.bernoulli(0.5)) a_set.push_back(v);
      }
      if (a_set.empty() || a_set.size() == b_set.size()) continue;
    }
    const auto init_a = infected_set_to_init(g.n, a_set);
    const auto init_b = infected_set_to_init(g.n, b_set);
    const auto viol = first_containment_violation(g, marks, variant, init_a, variant, init_b);
    if (viol) return AttractivenessViolation{k, viol->t, viol->vertex, a_set, b_set};
  }
  return std::nullopt;
}

bool is_path4(const Graph& g) {
  return g.n == 4 && g.edge_count() == 3 && g.has_edge(0, 1) && g.has_edge(1, 2) &&
         g.has_edge(2, 3);
}

namespace {

MarkSet p4_marks_base() {
  const Graph g = make_path(4);
  MarkSet ms;
  ms.horizon = 8.0;
  ms.seed = 0;
  ms.arrows.assign(g.directed_edge_count(), {});
  ms.dots.assign(g.n, {});
  ms.crosses.assign(g.n, {});
  const auto arrow = [&](std::uint32_t u, std::uint32_t v, std::vector<double> times) {
    const auto& nb = g.adj[u];
    const std::size_t k = std::lower_bound(nb.begin(), nb.end(), v) - nb.begin();
    ms.arrows[g.directed_edge_index(u, k)] = std::move(times);
  };
  arrow(0, 1, {1.5});
  arrow(1, 0, {6.0});
  arrow(1, 2, {2.5});
  arrow(2, 3, {4.5});
  arrow(3, 2, {1.2, 6.2});
  return ms;
}

}  // namespace

MarkSet p4_reference_marks() {
  MarkSet ms = p4_marks_base();
  ms.dots[0] = {3.0};
  ms.dots[2] = {5.0};
  ms.dots[3] = {2.5, 7.0};
  return ms;
}

MarkSet p4_counterexample_marks() {
  MarkSet ms = p4_marks_base();
  ms.dots[0] = {6.5};
  ms.dots[2] = {5.0};
  ms.dots[3] = {2.5, 7.0};
  ms.crosses[0] = {2.0};
  ms.crosses[1] = {1.0};
  ms.crosses[3] = {5.0};
  return ms;
}

namespace {

double string_to_double(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t pos = 0;
      const double x = std::stod(s, &pos);
      if (pos == s.size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("marks: bad time value");
}

std::vector<std::string> times_to_strings(const std::vector<double>& ts) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(format_double(t));
  return out;
}

}  // namespace

nlohmann::json marks_to_json(const Graph& g, const MarkSet& marks) {
  validate_marks(g, marks);
  nlohmann::json j;
  j["horizon"] = format_double(marks.horizon);
  j["seed"] = marks.seed;
  nlohmann::json arrows = nlohmann::json::object();
  for (std::uint32_t u = 0; u < g.n; ++u)
    for (std::size_t k = 0; k < g.adj[u].size(); ++k) {
      const auto& ts = marks.arrows[g.directed_edge_index(u, k)];
      if (!ts.empty())
        arrows[std::to_string(u) + "->" + std::to_string(g.adj[u][k])] = times_to_strings(ts);
    }
  nlohmann::json dots = nlohmann::json::object(), crosses = nlohmann::json::object();
  for (std::uint32_t v = 0; v < g.n; ++v) {
    if (!marks.dots[v].empty()) dots[std::to_string(v)] = times_to_strings(marks.dots[v]);
    if (!marks.crosses[v].empty())
      crosses[std::to_string(v)] = times_to_strings(marks.crosses[v]);
  }
  j["arrows"] = std::move(arrows);
  j["dots"] = std::move(dots);
  j["crosses"] = std::move(crosses);
  return j;
}

MarkSet marks_from_json(const Graph& g, const nlohmann::json& j) {
  MarkSet ms;
  ms.horizon = string_to_double(j.at("horizon"));
  ms.seed = j.value("seed", std::uint64_t{0});
  ms.arrows.assign(g.directed_edge_count(), {});
  ms.dots.assign(g.n, {});
  ms.crosses.assign(g.n, {});

  const auto parse_vertex = [&](const std::string& s) -> std::uint32_t {
    const unsigned long v = std::stoul(s);
    if (v >= g.n) throw std::invalid_argument("marks: vertex out of range: " + s);
    return static_cast<std::uint32_t>(v);
  };
  const auto parse_times = [&](const nlohmann::json& arr) {
    std::vector<double> ts;
    for (const auto& e : arr) ts.push_back(string_to_double(e));
    return ts;
  };

  if (j.contains("arrows"))
    for (const auto& [key, val] : j.at("arrows").items()) {
      const auto sep = key.find("->");
      if (sep == std::string::npos) throw std::invalid_argument("marks: bad arrow key: " + key);
      const std::uint32_t u = parse_vertex(key.substr(0, sep));
      const std::uint32_t v = parse_vertex(key.substr(sep + 2));
      const auto& nb = g.adj[u];
      const auto it = std::lower_bound(nb.begin(), nb.end(), v);
      if (it == nb.end() || *it != v)
        throw std::invalid_argument("marks: arrow on a missing edge: " + key);
      ms.arrows[g.directed_edge_index(u, it - nb.begin())] = parse_times(val);
    }
  if (j.contains("dots"))
    for (const auto& [key, val] : j.at("dots").items())
      ms.dots[parse_vertex(key)] = parse_times(val);
  if (j.contains("crosses"))
    for (const auto& [key, val] : j.at("crosses").items())
      ms.crosses[parse_vertex(key)] = parse_times(val);
  validate_marks(g, ms);
  return ms;
}

void write_marks(const Graph& g, const MarkSet& marks, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << marks_to_json(g, marks).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

MarkSet read_marks(const Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return marks_from_json(g, j);
}

}  // namespace isovig::coupling
