#pragma once

// Trajectory post-processing: per-vertex phase decomposition, lit-hub counts
// on two-level stars, the explicit center-reinfection probability bound, the
// drift functional V_t = |A_t| - eta*|I_t|, renewal cycles of |I_t|, the
// asymmetric-walk ruin probability, and median-extinction-time scaling fits.

#include <cstdint>
#include <vector>

#include "isovig/dynamics.hpp"
#include "isovig/netgen.hpp"

namespace isovig::observables {

enum class PhaseKind : std::int8_t { minus_one = -1, zero = 0, one = 1 };

struct PhaseRecord {
  std::size_t index = 0;
  double start = 0.0;
  double end = 0.0;
  PhaseKind kind = PhaseKind::zero;
  // Set on `one` phases longer than 1/(1+alpha), the mean sojourn in state 1.
  bool is_long = false;
};

// Maximal constant-state intervals of one vertex, partitioning [0, t_end].
// Requires a full event log.
std::vector<PhaseRecord> extract_phases(const dynamics::Trajectory& tr, std::uint32_t vertex,
                                        double alpha);

// Replays a full trajectory forward; queries must be nondecreasing in time.
class StateCursor {
 public:
  explicit StateCursor(const dynamics::Trajectory& tr);
  void advance_to(double t);
  std::int8_t state(std::uint32_t v) const { return state_[v]; }
  const std::vector<std::int8_t>& states() const { return state_; }

 private:
  const dynamics::Trajectory* tr_;
  std::vector<std::int8_t> state_;
  std::size_t next_ = 0;
  double t_ = 0.0;
};

// Number of hubs that are infected and have at least delta*m infected leaves
// at time t (state taken right-continuously).
std::uint32_t lit_count_at(const dynamics::Trajectory& tr, const netgen::StarOfStars& star,
                           double delta, double t);

// Closed-form lower bound on the probability that the center of a hub star
// is reinfected within one unit of time while the hub stays infected:
//   e^{-3 alpha} * e^{-8/3} * (1 - e^{-1/3}) * e^{-2 lambda / 3}.
double center_reinfection_q(double alpha, double lambda);

struct DriftSeries {
  double eta = 0.0;
  std::vector<double> t;      // jump times, starting at 0
  std::vector<double> value;  // V at those times
  std::vector<double> jumps;  // V right after each event, in order
};

// V_t = |A_t| - eta*|I_t| along the trajectory.  Needs at least series-level
// recording.
DriftSeries drift_series(const dynamics::Trajectory& tr, double eta);

struct RenewalCycle {
  std::size_t index = 0;
  double t_start = 0.0;  // |I| hits round(2*eps*n/3)
  double t_end = 0.0;    // |I| hits one of the outer levels
  bool success = false;  // true when round(eps*n) was hit first
};

// Excursions of |I_t| from the middle level round(2*eps*n/3) to whichever of
// round(eps*n/3) and round(eps*n) is hit first.  Unfinished trailing
// excursions are dropped.
std::vector<RenewalCycle> renewal_cycles(const dynamics::Trajectory& tr, double eps);

// Probability that a +-1 random walk with up-probability p_up falls down_gap
// steps below its start before climbing up_gap steps above it.
double gambler_ruin_prob(double p_up, std::uint32_t down_gap, std::uint32_t up_gap);

struct FitSample {
  double value = 0.0;
  bool censored = false;  // value is the cap, a lower bound on the true time
};

struct FitSeries {
  std::uint32_t n = 0;
  std::vector<FitSample> samples;
};

enum class ScalingClass { linear_ish, exponential_ish, indeterminate };

struct FitReport {
  ScalingClass classification = ScalingClass::indeterminate;
  double linear_slope = 0.0;       // tau ~ slope * n
  double linear_rms_log_err = 0.0;
  double exp_rate = 0.0;           // log tau ~ rate * n + intercept
  double exp_intercept = 0.0;
  double exp_rms_log_err = 0.0;
  bool censoring_forced = false;   // >= half the top-size runs were censored
  double top_censored_fraction = 0.0;
  std::vector<std::uint32_t> sizes;
  std::vector<double> medians;
};

// Fits median extinction time against size under tau ~ a*n and
// log tau ~ a*n + b; classifies by a 2x ratio of RMS log-residuals, with a
// censored majority at the top size forcing exponential_ish.
FitReport fit_scaling(const std::vector<FitSeries>& table);

}  // namespace isovig::observables
