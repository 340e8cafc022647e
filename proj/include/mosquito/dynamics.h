#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mosquito/model.h"

namespace mosquito {

/// Finite-time cutoffs used to decide asymptotic fates.
struct FateThresholds {
  double extinction_radius = 1e-9;  ///< max-norm ball around the origin
  double divergence_x = 1e9;        ///< hard cutoff on larvae
  double y_limit_tolerance = 1e-6;  ///< |estimated y limit - alpha/mu|
  double stationary_step = 1e-14;   ///< max-norm step below which we stop
};

inline constexpr std::size_t kDefaultBudget = 1'000'000;
inline constexpr std::size_t kDefaultWindow = 1024;

// ---------------------------------------------------------------------------
// Trajectories

enum class Termination { Converged, Diverged, Budget };
const char* to_string(Termination t);

struct TrajectoryPoint {
  std::size_t n = 0;
  State state;

  bool operator==(const TrajectoryPoint&) const = default;
};

/// Orbit of the reduced operator. Long runs keep only the first and last
/// `window` points; indices n are strictly increasing and consecutive inside
/// each window.
struct Trajectory {
  Params params;
  std::vector<TrajectoryPoint> points;
  std::size_t steps = 0;  ///< operator applications actually recorded
  Termination terminated = Termination::Budget;

  /// True when points between the head and tail windows were dropped.
  bool windowed() const;
};

/// Applies step_w0 up to max_iter times. Stops early when x exceeds the
/// divergence cutoff or the image is non-finite (Diverged), or when the step
/// is shorter than the stationarity threshold (Converged).
Trajectory iterate(const Params& params, State s0, std::size_t max_iter,
                   std::size_t window = kDefaultWindow,
                   const FateThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Invariant regions

/// LowerBox: [0, x*] x [0, y*] minus the interior point.
/// UpperQuadrant: [x*, inf) x [y*, inf) minus the interior point.
enum class Region { LowerBox, UpperQuadrant, Outside, IsFixedPoint };
const char* to_string(Region r);

/// Exact comparison against (x*, y*); boundaries count as inside. Throws
/// ConfigurationError when no interior fixed point exists.
Region membership(const Params& params, State s);

// ---------------------------------------------------------------------------
// Long-run fate

enum class Verdict { Extinction, UnboundedGrowth, Undetermined };
const char* to_string(Verdict v);

/// Which known result the verdict leans on.
enum class FateBasis {
  SubThresholdExtinction,  ///< no interior point and some y^(n) <= alpha/mu
  LowerBoxExtinction,      ///< start in the lower invariant box
  UpperQuadrantGrowth,     ///< start in the upper invariant quadrant
  Empirical,               ///< start outside both invariant regions
};
const char* to_string(FateBasis b);

struct TrajectoryOutcome {
  Verdict verdict = Verdict::Undetermined;
  std::size_t iterations = 0;
  State final_state;
  /// Extrapolated limit of y^(n); set for UnboundedGrowth and, when
  /// available, for undetermined runs that reached the growth checks.
  std::optional<double> y_limit_estimate;
  std::optional<FateBasis> basis;
  std::string note;
};

/// Decides whether the orbit of s0 dies out or grows without bound.
///
/// Extinction is declared once the orbit enters the extinction ball.
/// Unbounded growth is declared once the orbit is in the upper invariant
/// quadrant (or past the divergence cutoff) and an extrapolated limit of y,
/// fitted against 1/(1+x) at geometric checkpoints of x, has settled within
/// y_limit_tolerance of alpha/mu. Everything else within the budget is
/// Undetermined.
TrajectoryOutcome classify_fate(const Params& params, State s0,
                                std::size_t budget = kDefaultBudget,
                                const FateThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Property checks

struct InvarianceReport {
  Region region = Region::LowerBox;
  std::size_t samples = 0;
  std::size_t escapes = 0;
  std::optional<State> counterexample;        ///< first escaping start
  std::optional<State> counterexample_image;  ///< its image

  bool passed() const { return escapes == 0; }
};

/// Samples `samples` uniform points of the region, applies step_w0 once and
/// counts images that leave it. The unbounded quadrant is sampled on
/// [x*, x*+span] x [y*, y*+span]; span defaults to 10 max(x*, y*).
InvarianceReport check_invariance(const Params& params, Region region,
                                  std::size_t samples, std::uint64_t seed,
                                  std::optional<double> window_span = {});

struct MonotonicityReport {
  /// Earliest index after which both coordinates are monotone through the
  /// horizon; absent if the last step is not monotone.
  std::optional<std::size_t> n0;
  bool constant = false;  ///< start is the interior fixed point
  std::size_t horizon = 0;
};

/// Non-increasing tail in the lower box, non-decreasing in the upper
/// quadrant.
MonotonicityReport monotonicity_probe(const Params& params, State s0,
                                      std::size_t horizon);

/// (x'+y') - (x+y) + (beta-mu) y/(gamma+y) (y* - y), evaluated from the
/// operator increment. Throws ConfigurationError when beta <= mu.
double sum_identity_residual(const Params& params, State s);

/// max(1, birth, death, emergence) at s: the size of the terms whose
/// rounding the residual inherits.
double sum_identity_scale(const Params& params, State s);

struct SumIdentityReport {
  std::size_t samples = 0;
  double max_abs_residual = 0;
  double max_scaled_residual = 0;  ///< max of |residual| / sum_identity_scale
  State worst;
};

/// Uniform states in [0, box]^2.
SumIdentityReport check_sum_identity(const Params& params, std::size_t samples,
                                     std::uint64_t seed, double box = 100.0);

struct AdultBoundReport {
  std::size_t starts = 0;
  std::size_t violations = 0;
  std::optional<State> counterexample;  ///< offending start
  double worst_excess = 0;  ///< max of y^(n) - max(y^(0), alpha/mu)

  bool passed() const { return violations == 0; }
};

/// Checks y^(n) <= max(y^(0), alpha/mu) + 1e-12 along `horizon` steps from
/// uniform starts in [0, box]^2.
AdultBoundReport check_adult_bound(const Params& params, std::size_t starts,
                                   std::size_t horizon, std::uint64_t seed,
                                   double box = 100.0);

// ---------------------------------------------------------------------------
// Basin scan

/// count >= 2 equally spaced nodes on [lo, hi].
struct GridAxis {
  double lo = 0;
  double hi = 0;
  std::size_t count = 2;

  double at(std::size_t i) const;
  bool operator==(const GridAxis&) const = default;
};

struct BasinCell {
  Verdict verdict = Verdict::Undetermined;
  std::size_t iterations = 0;

  bool operator==(const BasinCell&) const = default;
};

/// Row-major in y then x: cells[j * x.count + i] starts at (x.at(i), y.at(j)).
struct BasinGrid {
  GridAxis x;
  GridAxis y;
  std::vector<BasinCell> cells;

  const BasinCell& at(std::size_t i, std::size_t j) const {
    return cells[j * x.count + i];
  }
  bool operator==(const BasinGrid&) const = default;
};

/// Classifies every node with classify_fate. workers = 0 uses the hardware
/// concurrency. The result does not depend on the worker count.
BasinGrid basin_scan(const Params& params, const GridAxis& x,
                     const GridAxis& y, std::size_t budget = kDefaultBudget,
                     unsigned workers = 0,
                     const FateThresholds& thresholds = {});

// ---------------------------------------------------------------------------

/// Reproducible uniform sampler on [0, 1); the same seed yields the same
/// stream on every platform.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : engine_(seed) {}

  // Top 53 bits of the engine output; std::uniform_real_distribution is not
  // specified bit-exactly across standard libraries.
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mosquito
