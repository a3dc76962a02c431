#include "isovig/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isovig::observables {

using dynamics::RecordLevel;
using dynamics::Trajectory;

std::vector<PhaseRecord> extract_phases(const Trajectory& tr, std::uint32_t vertex,
                                        double alpha) {
  if (tr.level != RecordLevel::full)
    throw std::invalid_argument("extract_phases: needs a full event log");
  if (vertex >= tr.n) throw std::invalid_argument("extract_phases: vertex out of range");
  if (!(alpha >= 0.0)) throw std::invalid_argument("extract_phases: alpha must be nonnegative");

  const double long_cut = 1.0 / (1.0 + alpha);
  std::vector<PhaseRecord> phases;
  std::int8_t cur = tr.initial_state[vertex];
  double start = 0.0;
  const auto close = [&](double end) {
    if (end <= start) return;
    PhaseRecord ph;
    ph.index = phases.size();
    ph.start = start;
    ph.end = end;
    ph.kind = static_cast<PhaseKind>(cur);
    ph.is_long = cur == 1 && (end - start) > long_cut;
    phases.push_back(ph);
  };
  for (const auto& ev : tr.events) {
    if (ev.v != vertex) continue;
    if (ev.t > tr.t_end) break;
    close(ev.t);
    start = ev.t;
    cur = ev.to;
  }
  close(tr.t_end);
  return phases;
}

StateCursor::StateCursor(const Trajectory& tr) : tr_(&tr), state_(tr.initial_state) {
  if (tr.level != RecordLevel::full)
    throw std::invalid_argument("StateCursor: needs a full event log");
}

void StateCursor::advance_to(double t) {
  if (t < t_) throw std::invalid_argument("StateCursor: queries must be nondecreasing");
  t_ = t;
  while (next_ < tr_->events.size() && tr_->events[next_].t <= t) {
    state_[tr_->events[next_].v] = tr_->events[next_].to;
    ++next_;
  }
}

std::uint32_t lit_count_at(const Trajectory& tr, const netgen::StarOfStars& star, double delta,
                           double t) {
  if (!(delta >= 0.0)) throw std::invalid_argument("lit_count_at: delta must be nonnegative");
  StateCursor cur(tr);
  cur.advance_to(t);
  const double m = static_cast<double>(star.order());
  std::uint32_t lit = 0;
  for (std::size_t i = 0; i < star.hubs.size(); ++i) {
    if (cur.state(star.hubs[i]) != 1) continue;
    std::uint32_t infected_leaves = 0;
    for (std::uint32_t leaf : star.leaves[i])
      if (cur.state(leaf) == 1) ++infected_leaves;
    if (static_cast<double>(infected_leaves) >= delta * m) ++lit;
  }
  return lit;
}

double center_reinfection_q(double alpha, double lambda) {
  if (!(alpha >= 0.0) || !(lambda >= 0.0))
    throw std::invalid_argument("center_reinfection_q: rates must be nonnegative");
  return std::exp(-3.0 * alpha) * std::exp(-8.0 / 3.0) * (-std::expm1(-1.0 / 3.0)) *
         std::exp(-2.0 * lambda / 3.0);
}

DriftSeries drift_series(const Trajectory& tr, double eta) {
  if (tr.level == RecordLevel::summary)
    throw std::invalid_argument("drift_series: needs series-level recording");
  DriftSeries out;
  out.eta = eta;
  out.t.reserve(tr.series.size());
  out.value.reserve(tr.series.size());
  for (const auto& pt : tr.series) {
    const double v = static_cast<double>(pt.isolated) - eta * static_cast<double>(pt.infected);
    out.t.push_back(pt.t);
    out.value.push_back(v);
    if (out.t.size() > 1) out.jumps.push_back(v);
  }
  return out;
}

std::vector<RenewalCycle> renewal_cycles(const Trajectory& tr, double eps) {
  if (tr.level == RecordLevel::summary)
    throw std::invalid_argument("renewal_cycles: needs series-level recording");
  if (!(eps > 0.0)) throw std::invalid_argument("renewal_cycles: eps must be positive");
  const double n = static_cast<double>(tr.n);
  const auto level = [&](double x) { return static_cast<std::uint32_t>(std::llround(x)); };
  const std::uint32_t lo = level(eps * n / 3.0);
  const std::uint32_t mid = level(2.0 * eps * n / 3.0);
  const std::uint32_t hi = level(eps * n);
  if (lo == mid || mid == hi)
    throw std::invalid_argument("renewal_cycles: levels collide at this size");

  std::vector<RenewalCycle> cycles;
  bool in_cycle = false;
  double start = 0.0;
  for (const auto& pt : tr.series) {
    if (!in_cycle) {
      if (pt.infected == mid) {
        in_cycle = true;
        start = pt.t;
      }
    } else if (pt.infected == lo || pt.infected == hi) {
      RenewalCycle c;
      c.index = cycles.size();
      c.t_start = start;
      c.t_end = pt.t;
      c.success = pt.infected == hi;
      cycles.push_back(c);
      in_cycle = false;
    }
  }
  return cycles;
}

double gambler_ruin_prob(double p_up, std::uint32_t down_gap, std::uint32_t up_gap) {
  if (!(p_up > 0.0) || !(p_up < 1.0))
    throw std::invalid_argument("gambler_ruin_prob: p_up must lie in (0, 1)");
  if (down_gap == 0 || up_gap == 0)
    throw std::invalid_argument("gambler_ruin_prob: gaps must be positive");
  const double a = static_cast<double>(down_gap);
  const double b = static_cast<double>(up_gap);
  if (p_up == 0.5) return b / (a + b);
  // Ratio form with r = (1-p)/p; for p < 1/2 rewrite in powers of 1/r < 1 so
  // nothing overflows.
  if (p_up > 0.5) {
    const double r = (1.0 - p_up) / p_up;
    const double num = std::pow(r, a) - std::pow(r, a + b);
    const double den = 1.0 - std::pow(r, a + b);
    return num / den;
  }
  const double s = p_up / (1.0 - p_up);  // = 1/r < 1
  const double num = std::pow(s, b) - std::pow(s, a + b);
  const double den = 1.0 - std::pow(s, a + b);
  return 1.0 - num / den;
}

FitReport fit_scaling(const std::vector<FitSeries>& table) {
  if (table.size() < 3) throw std::invalid_argument("fit_scaling: need at least 3 sizes");
  for (const auto& row : table) {
    if (row.samples.size() < 20)
      throw std::invalid_argument("fit_scaling: need at least 20 samples per size");
    if (row.n == 0) throw std::invalid_argument("fit_scaling: sizes must be positive");
  }

  FitReport rep;
  for (const auto& row : table) {
    std::vector<double> vals;
    vals.reserve(row.samples.size());
    for (const auto& s : row.samples) vals.push_back(s.value);
    std::sort(vals.begin(), vals.end());
    const std::size_t k = vals.size();
    const double median = k % 2 == 1 ? vals[k / 2] : 0.5 * (vals[k / 2 - 1] + vals[k / 2]);
    if (!(median > 0.0)) throw std::invalid_argument("fit_scaling: nonpositive median");
    rep.sizes.push_back(row.n);
    rep.medians.push_back(median);
  }

  const std::size_t k = rep.sizes.size();
  double sn2 = 0.0, snt = 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double n = static_cast<double>(rep.sizes[i]);
    const double tau = rep.medians[i];
    sn2 += n * n;
    snt += n * tau;
    sx += n;
    sy += std::log(tau);
    sxx += n * n;
    sxy += n * std::log(tau);
  }
  rep.linear_slope = snt / sn2;
  const double kk = static_cast<double>(k);
  rep.exp_rate = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  rep.exp_intercept = (sy - rep.exp_rate * sx) / kk;

  double lin_sq = 0.0, exp_sq = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double n = static_cast<double>(rep.sizes[i]);
    const double log_tau = std::log(rep.medians[i]);
    const double lin_fit = rep.linear_slope * n;
    const double lin_err =
        lin_fit > 0.0 ? log_tau - std::log(lin_fit) : std::numeric_limits<double>::infinity();
    lin_sq += lin_err * lin_err;
    const double exp_err = log_tau - (rep.exp_rate * n + rep.exp_intercept);
    exp_sq += exp_err * exp_err;
  }
  rep.linear_rms_log_err = std::sqrt(lin_sq / kk);
  rep.exp_rms_log_err = std::sqrt(exp_sq / kk);

  // Censored majority at the largest size overrides the residual comparison:
  // the medians there are only lower bounds.
  std::size_t top = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (rep.sizes[i] > rep.sizes[top]) top = i;
  std::size_t censored = 0;
  for (const auto& s : table[top].samples) censored += s.censored ? 1 : 0;
  rep.top_censored_fraction =
      static_cast<double>(censored) / static_cast<double>(table[top].samples.size());
  if (rep.top_censored_fraction >= 0.5) {
    rep.censoring_forced = true;
    rep.classification = ScalingClass::exponential_ish;
    return rep;
  }

  if (rep.linear_rms_log_err < 0.5 * rep.exp_rms_log_err)
    rep.classification = ScalingClass::linear_ish;
  else if (rep.exp_rms_log_err < 0.5 * rep.linear_rms_log_err)
    rep.classification = ScalingClass::exponential_ish;
  else
    rep.classification = ScalingClass::indeterminate;
  return rep;
}

}  // namespace isovig::observables
