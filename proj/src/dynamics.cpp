#include "isovig/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isovig::dynamics {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::classical: return "classical";
    case Variant::isolation: return "isolation";
    case Variant::vigilance: return "vigilance";
    case Variant::comparison: return "comparison";
  }
  throw std::logic_error("variant_name: bad enum");
}

Variant variant_from_name(const std::string& name) {
  if (name == "classical") return Variant::classical;
  if (name == "isolation") return Variant::isolation;
  if (name == "vigilance") return Variant::vigilance;
  if (name == "comparison") return Variant::comparison;
  throw std::invalid_argument("unknown variant: " + name);
}

SystemState::SystemState(const Graph& g, const std::vector<std::int8_t>& init,
                         const ModelParams& p)
    : g_(&g), p_(p), tree_(g.n) {
  if (init.size() != g.n) throw std::invalid_argument("SystemState: init size mismatch");
  if (!(p.lambda >= 0.0) || !(p.alpha >= 0.0))
    throw std::invalid_argument("SystemState: rates must be nonnegative");
  for (std::int8_t s : init)
    if (s != -1 && s != 0 && s != 1) throw std::invalid_argument("SystemState: bad state value");

  state_ = init;
  inf_nbrs_.assign(g.n, 0);
  healthy_nbrs_.assign(g.n, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) {
    switch (state_[v]) {
      case 0: ++n_susceptible_; break;
      case 1: ++n_infected_; break;
      default: ++n_isolated_; break;
    }
    for (std::uint32_t w : g.adj[v]) {
      if (state_[w] == 1) ++inf_nbrs_[v];
      if (state_[w] == 0) ++healthy_nbrs_[v];
    }
    if (state_[v] == 0) si_edges_ += inf_nbrs_[v];
  }
  // si_edges_ now counts healthy-infected edges once each (from the healthy
  // side).
  for (std::uint32_t v = 0; v < g.n; ++v) tree_.set(v, vertex_rate(v));
}

double SystemState::vertex_rate(std::uint32_t v) const {
  switch (state_[v]) {
    case 0: {
      double r = p_.lambda * inf_nbrs_[v];
      if (p_.variant == Variant::comparison) r += p_.alpha;
      return r;
    }
    case 1: {
      double r = 1.0;
      if (p_.variant == Variant::isolation || p_.variant == Variant::comparison) r += p_.alpha;
      if (p_.variant == Variant::vigilance) r += p_.alpha * healthy_nbrs_[v];
      return r;
    }
    default:
      return p_.variant == Variant::classical ? 0.0 : 1.0;
  }
}

void SystemState::refresh_vertex(std::uint32_t v) { tree_.set(v, vertex_rate(v)); }

void SystemState::apply_transition(std::uint32_t v, std::int8_t to, double t) {
  const std::int8_t from = state_[v];
  if (from == to) throw std::logic_error("apply_transition: no-op transition");
  t_ = t;
  state_[v] = to;

  const auto bump = [&](std::int8_t s, int d) {
    switch (s) {
      case 0: n_susceptible_ += d; break;
      case 1: n_infected_ += d; break;
      default: n_isolated_ += d; break;
    }
  };
  bump(from, -1);
  bump(to, +1);

  const int d_inf = (to == 1 ? 1 : 0) - (from == 1 ? 1 : 0);
  const int d_healthy = (to == 0 ? 1 : 0) - (from == 0 ? 1 : 0);
  for (std::uint32_t w : g_->adj[v]) {
    if (d_inf != 0) {
      inf_nbrs_[w] = static_cast<std::uint32_t>(static_cast<int>(inf_nbrs_[w]) + d_inf);
      if (state_[w] == 0) si_edges_ += d_inf;
    }
    if (d_healthy != 0) {
      healthy_nbrs_[w] = static_cast<std::uint32_t>(static_cast<int>(healthy_nbrs_[w]) + d_healthy);
      if (state_[w] == 1) si_edges_ += d_healthy;
    }
    refresh_vertex(w);
  }
  refresh_vertex(v);
}

std::optional<Event> SystemState::step(Rng& rng) {
  return step(rng, std::numeric_limits<double>::infinity());
}

std::optional<Event> SystemState::step(Rng& rng, double t_cap) {
  const double total = tree_.total();
  if (!(total > 0.0)) return std::nullopt;
  const double dt = rng.exponential(total);
  const double t = t_ + dt;
  // Returning before the vertex draw keeps the stream position such that a
  // rerun with a larger cap replays an identical event prefix.
  if (t > t_cap) return std::nullopt;
  const std::uint32_t v = static_cast<std::uint32_t>(tree_.sample(rng.uniform01() * total));
  const std::int8_t from = state_[v];

  std::int8_t to;
  switch (from) {
    case 0: {
      if (p_.variant == Variant::comparison) {
        const double infect_w = p_.lambda * inf_nbrs_[v];
        to = (rng.uniform01() * tree_.get(v) < infect_w) ? std::int8_t{1} : std::int8_t{-1};
      } else {
        to = 1;
      }
      break;
    }
    case 1: {
      const double rate = tree_.get(v);
      if (rate > 1.0) {
        to = (rng.uniform01() * rate < 1.0) ? std::int8_t{0} : std::int8_t{-1};
      } else {
        to = 0;
      }
      break;
    }
    default:
      to = 0;
      break;
  }
  apply_transition(v, to, t);
  return Event{t, v, from, to};
}

bool SystemState::audit() const {
  std::uint32_t ns = 0, ni = 0, na = 0;
  std::uint64_t si = 0;
  for (std::uint32_t v = 0; v < g_->n; ++v) {
    std::uint32_t inf = 0, healthy = 0;
    for (std::uint32_t w : g_->adj[v]) {
      if (state_[w] == 1) ++inf;
      if (state_[w] == 0) ++healthy;
    }
    if (inf != inf_nbrs_[v] || healthy != healthy_nbrs_[v]) return false;
    switch (state_[v]) {
      case 0: ++ns; si += inf; break;
      case 1: ++ni; break;
      default: ++na; break;
    }
    if (tree_.get(v) != vertex_rate(v)) return false;
  }
  if (ns != n_susceptible_ || ni != n_infected_ || na != n_isolated_ || si != si_edges_)
    return false;
  double analytic = 0.0;
  for (std::uint32_t v = 0; v < g_->n; ++v) analytic += vertex_rate(v);
  const double indexed = tree_.total();
  const double scale = std::max(analytic, 1.0);
  return std::abs(indexed - analytic) <= 1e-9 * scale;
}

RateTable total_rates(const SystemState& st, const ModelParams& p) {
  RateTable r;
  r.infection = p.lambda * static_cast<double>(st.count_si_edges());
  r.recovery = static_cast<double>(st.count_infected());
  switch (p.variant) {
    case Variant::classical:
      break;
    case Variant::isolation:
      r.isolation = p.alpha * static_cast<double>(st.count_infected());
      break;
    case Variant::vigilance:
      r.isolation = p.alpha * static_cast<double>(st.count_si_edges());
      break;
    case Variant::comparison:
      r.isolation =
          p.alpha * static_cast<double>(st.count_susceptible() + st.count_infected());
      break;
  }
  if (p.variant != Variant::classical)
    r.return_from_isolation = static_cast<double>(st.count_isolated());
  return r;
}

Trajectory run(const Graph& g, const std::vector<std::int8_t>& init, const ModelParams& p,
               double t_cap, std::uint64_t seed, RecordLevel level) {
  if (!(t_cap >= 0.0)) throw std::invalid_argument("run: t_cap must be nonnegative");
  SystemState st(g, init, p);
  Rng rng(seed);

  Trajectory tr;
  tr.n = g.n;
  tr.seed = seed;
  tr.t_cap = t_cap;
  tr.level = level;
  tr.initial_state = init;
  if (level != RecordLevel::summary)
    tr.series.push_back({0.0, st.count_infected(), st.count_isolated()});

  while (st.count_infected() > 0) {
    // Recovery rate is at least |I|, so the chain is never absorbed here; a
    // missing event means the next one lands past the cap.
    const auto ev = st.step(rng, t_cap);
    if (!ev) {
      tr.censored = true;
      break;
    }
    ++tr.event_count;
    if (level == RecordLevel::full) tr.events.push_back(*ev);
    if (level != RecordLevel::summary)
      tr.series.push_back({ev->t, st.count_infected(), st.count_isolated()});
  }

  tr.final_infected = st.count_infected();
  tr.final_isolated = st.count_isolated();
  if (tr.censored) {
    tr.t_end = t_cap;
  } else {
    tr.extinction_time = st.time();
    tr.t_end = st.time();
  }
  return tr;
}

std::vector<std::int8_t> all_infected(std::uint32_t n) {
  return std::vector<std::int8_t>(n, 1);
}

}  // namespace isovig::dynamics
