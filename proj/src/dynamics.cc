#include "mosquito/dynamics.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "mosquito/errors.h"
#include "mosquito/stability.h"

namespace mosquito {
namespace {

using internal::step_w0_unchecked;

double max_norm(State s) { return std::max(std::abs(s.x), std::abs(s.y)); }

double step_length(State a, State b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

bool finite_state(State s) { return std::isfinite(s.x) && std::isfinite(s.y); }

State require_interior(const Params& params, const char* what) {
  const auto z = interior_fixed_point(params);
  if (!z) {
    throw ConfigurationError(std::string(what) +
                             ": requires beta > mu (1 + gamma mu / alpha)");
  }
  return *z;
}

Region region_of(State s, State z) {
  if (s.x == z.x && s.y == z.y) return Region::IsFixedPoint;
  if (s.x <= z.x && s.y <= z.y) return Region::LowerBox;
  if (s.x >= z.x && s.y >= z.y) return Region::UpperQuadrant;
  return Region::Outside;
}

// Records (1/(1+x), y) each time x passes the next power-of-two level and
// extrapolates y to 1/(1+x) = 0 with a quadratic through the last three
// checkpoints. The deviation of y from its limit is a smooth function of
// 1/(1+x) once x grows steadily, so successive estimates converge quickly.
class GrowthTracker {
 public:
  explicit GrowthTracker(double settle_tolerance)
      : settle_tolerance_(settle_tolerance) {}

  void observe(State s) {
    if (have_last_ && s.x < last_x_) reset();
    have_last_ = true;
    last_x_ = s.x;
    if (s.x < next_level_) return;
    t_.push_back(1.0 / (1.0 + s.x));
    y_.push_back(s.y);
    while (next_level_ <= s.x) next_level_ *= 2.0;
    if (t_.size() < 3) return;
    const double estimate = extrapolate();
    settled_ = estimate_.has_value() &&
               std::abs(estimate - *estimate_) <= settle_tolerance_ &&
               s.x >= kMinSettleX;
    estimate_ = estimate;
  }

  bool settled() const { return settled_; }
  const std::optional<double>& estimate() const { return estimate_; }

 private:
  static constexpr double kFirstLevel = 16.0;
  static constexpr double kMinSettleX = 256.0;

  void reset() {
    t_.clear();
    y_.clear();
    next_level_ = kFirstLevel;
    estimate_.reset();
    settled_ = false;
  }

  double extrapolate() const {
    const std::size_t k = t_.size();
    const std::array<double, 3> t{t_[k - 3], t_[k - 2], t_[k - 1]};
    const std::array<double, 3> y{y_[k - 3], y_[k - 2], y_[k - 1]};
    double sum = 0;
    for (int i = 0; i < 3; ++i) {
      double w = 1.0;
      for (int j = 0; j < 3; ++j) {
        if (j != i) w *= t[j] / (t[j] - t[i]);
      }
      sum += w * y[i];
    }
    return sum;
  }

  double settle_tolerance_;
  std::vector<double> t_;
  std::vector<double> y_;
  double next_level_ = kFirstLevel;
  double last_x_ = 0;
  bool have_last_ = false;
  std::optional<double> estimate_;
  bool settled_ = false;
};

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Diverged: return "diverged";
    case Termination::Budget: return "budget";
  }
  return "?";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::LowerBox: return "lower-box";
    case Region::UpperQuadrant: return "upper-quadrant";
    case Region::Outside: return "outside";
    case Region::IsFixedPoint: return "fixed-point";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Extinction: return "extinction";
    case Verdict::UnboundedGrowth: return "unbounded";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(FateBasis b) {
  switch (b) {
    case FateBasis::SubThresholdExtinction: return "sub-threshold";
    case FateBasis::LowerBoxExtinction: return "lower-box";
    case FateBasis::UpperQuadrantGrowth: return "upper-quadrant";
    case FateBasis::Empirical: return "empirical";
  }
  return "?";
}

bool Trajectory::windowed() const {
  return !points.empty() && points.back().n + 1 != points.size();
}

Trajectory iterate(const Params& params, State s0, std::size_t max_iter,
                   std::size_t window, const FateThresholds& thresholds) {
  require_analysis_valid(params);
  require_quadrant(s0);
  if (max_iter < 1) throw ConfigurationError("iterate: max_iter must be >= 1");
  if (window < 1) throw ConfigurationError("iterate: window must be >= 1");

  Trajectory traj{params, {}, 0, Termination::Budget};
  std::deque<TrajectoryPoint> tail;
  const auto record = [&](std::size_t n, State s) {
    if (traj.points.size() < window) {
      traj.points.push_back({n, s});
      return;
    }
    tail.push_back({n, s});
    if (tail.size() > window) tail.pop_front();
  };

  record(0, s0);
  State s = s0;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const State next = step_w0_unchecked(params, s);
    if (!finite_state(next)) {
      traj.terminated = Termination::Diverged;
      break;
    }
    record(n, next);
    traj.steps = n;
    if (next.x > thresholds.divergence_x) {
      traj.terminated = Termination::Diverged;
      break;
    }
    if (step_length(s, next) < thresholds.stationary_step) {
      traj.terminated = Termination::Converged;
      break;
    }
    s = next;
  }
  traj.points.insert(traj.points.end(), tail.begin(), tail.end());
  return traj;
}

Region membership(const Params& params, State s) {
  require_analysis_valid(params);
  require_quadrant(s);
  return region_of(s, require_interior(params, "membership"));
}

TrajectoryOutcome classify_fate(const Params& params, State s0,
                                std::size_t budget,
                                const FateThresholds& thresholds) {
  require_analysis_valid(params);
  require_quadrant(s0);
  const double y_limit = params.alpha() / params.mu();
  const std::optional<State> interior = interior_fixed_point(params);

  TrajectoryOutcome out;
  out.final_state = s0;
  out.basis = FateBasis::Empirical;
  if (interior) {
    switch (region_of(s0, *interior)) {
      case Region::IsFixedPoint:
        out.note = "start is the interior fixed point";
        return out;
      case Region::LowerBox:
        out.basis = FateBasis::LowerBoxExtinction;
        break;
      case Region::UpperQuadrant:
        out.basis = FateBasis::UpperQuadrantGrowth;
        break;
      case Region::Outside:
        break;
    }
  }

  GrowthTracker growth(thresholds.y_limit_tolerance / 10.0);
  const auto finish = [&](Verdict v, std::size_t n, State s,
                          std::string note) {
    out.verdict = v;
    out.iterations = n;
    out.final_state = s;
    out.y_limit_estimate = growth.estimate();
    out.note = std::move(note);
    return out;
  };

  State s = s0;
  for (std::size_t n = 0;; ++n) {
    if (!interior && out.basis == FateBasis::Empirical && s.y <= y_limit) {
      out.basis = FateBasis::SubThresholdExtinction;
    }
    if (max_norm(s) <= thresholds.extinction_radius) {
      return finish(Verdict::Extinction, n, s, "");
    }

    // Growth is certain once the orbit sits in the upper invariant quadrant;
    // without an interior point only the hard cutoff certifies it.
    const bool past_cutoff = s.x >= thresholds.divergence_x;
    const bool growth_certain =
        past_cutoff ||
        (interior && region_of(s, *interior) == Region::UpperQuadrant);
    if (growth_certain || !interior) growth.observe(s);
    if (growth_certain && (growth.settled() || past_cutoff)) {
      const auto& est = growth.estimate();
      if (est && std::abs(*est - y_limit) <= thresholds.y_limit_tolerance) {
        return finish(Verdict::UnboundedGrowth, n, s, "");
      }
      return finish(Verdict::Undetermined, n, s,
                    "x grows but the y limit estimate misses alpha/mu");
    }

    if (n == budget) {
      return finish(Verdict::Undetermined, n, s, "iteration budget exhausted");
    }
    const State next = step_w0_unchecked(params, s);
    if (!finite_state(next)) {
      return finish(Verdict::Undetermined, n, s, "non-finite iterate");
    }
    const bool stalled = step_length(s, next) < thresholds.stationary_step;
    s = next;
    if (stalled && max_norm(s) > thresholds.extinction_radius) {
      return finish(Verdict::Undetermined, n + 1, s,
                    "stationary away from the origin");
    }
  }
}

InvarianceReport check_invariance(const Params& params, Region region,
                                  std::size_t samples, std::uint64_t seed,
                                  std::optional<double> window_span) {
  require_analysis_valid(params);
  const State z = require_interior(params, "check_invariance");
  if (region != Region::LowerBox && region != Region::UpperQuadrant) {
    throw ConfigurationError(
        "check_invariance: region must be the lower box or upper quadrant");
  }
  const double span = window_span.value_or(10.0 * std::max(z.x, z.y));
  if (!std::isfinite(span) || !(span > 0)) {
    throw ConfigurationError("check_invariance: window span must be > 0");
  }

  InvarianceReport report;
  report.region = region;
  UniformSampler rng(seed);
  while (report.samples < samples) {
    State s;
    if (region == Region::LowerBox) {
      s = {rng.in(0.0, z.x), rng.in(0.0, z.y)};
    } else {
      s = {rng.in(z.x, z.x + span), rng.in(z.y, z.y + span)};
    }
    if (region_of(s, z) != region) continue;  // only the fixed point itself
    ++report.samples;
    const State image = step_w0_unchecked(params, s);
    if (!finite_state(image) || image.x < 0 || image.y < 0 ||
        region_of(image, z) != region) {
      if (report.escapes++ == 0) {
        report.counterexample = s;
        report.counterexample_image = image;
      }
    }
  }
  return report;
}

MonotonicityReport monotonicity_probe(const Params& params, State s0,
                                      std::size_t horizon) {
  require_analysis_valid(params);
  require_quadrant(s0);
  const State z = require_interior(params, "monotonicity_probe");
  if (horizon < 1) {
    throw ConfigurationError("monotonicity_probe: horizon must be >= 1");
  }
  MonotonicityReport report;
  report.horizon = horizon;
  const Region region = region_of(s0, z);
  if (region == Region::IsFixedPoint) {
    report.n0 = 0;
    report.constant = true;
    return report;
  }
  if (region == Region::Outside) {
    throw ConfigurationError(
        "monotonicity_probe: start must lie in an invariant region");
  }

  std::vector<State> orbit;
  orbit.reserve(horizon + 1);
  orbit.push_back(s0);
  for (std::size_t n = 0; n < horizon; ++n) {
    orbit.push_back(step_w0_unchecked(params, orbit.back()));
  }
  const bool decreasing = region == Region::LowerBox;
  const auto monotone_step = [&](std::size_t k) {
    const State a = orbit[k];
    const State b = orbit[k + 1];
    return decreasing ? (b.x <= a.x && b.y <= a.y)
                      : (b.x >= a.x && b.y >= a.y);
  };
  std::size_t n0 = 0;
  for (std::size_t k = horizon; k-- > 0;) {
    if (!monotone_step(k)) {
      n0 = k + 1;
      break;
    }
  }
  if (n0 < horizon) report.n0 = n0;
  return report;
}

double sum_identity_residual(const Params& params, State s) {
  require_quadrant(s);
  const auto y_star = interior_adult_density(params);
  if (!y_star) {
    throw ConfigurationError("sum_identity_residual: requires beta > mu");
  }
  const Increment inc = internal::w0_increment_unchecked(params, s);
  const double correction = (params.beta() - params.mu()) * s.y /
                            (params.gamma() + s.y) * (*y_star - s.y);
  return (inc.dx + inc.dy) + correction;
}

double sum_identity_scale(const Params& params, State s) {
  require_quadrant(s);
  const double birth = params.beta() * s.y / (params.gamma() + s.y) * s.y;
  return std::max({1.0, birth, params.mu() * s.y,
                   params.alpha() * k_response(s.x)});
}

SumIdentityReport check_sum_identity(const Params& params, std::size_t samples,
                                     std::uint64_t seed, double box) {
  SumIdentityReport report;
  UniformSampler rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const State s{rng.in(0.0, box), rng.in(0.0, box)};
    const double r = std::abs(sum_identity_residual(params, s));
    report.max_scaled_residual =
        std::max(report.max_scaled_residual, r / sum_identity_scale(params, s));
    ++report.samples;
    if (r > report.max_abs_residual || i == 0) {
      report.max_abs_residual = r;
      report.worst = s;
    }
  }
  return report;
}

AdultBoundReport check_adult_bound(const Params& params, std::size_t starts,
                                   std::size_t horizon, std::uint64_t seed,
                                   double box) {
  require_analysis_valid(params);
  const double y_limit = params.alpha() / params.mu();
  AdultBoundReport report;
  UniformSampler rng(seed);
  for (std::size_t i = 0; i < starts; ++i) {
    const State s0{rng.in(0.0, box), rng.in(0.0, box)};
    const double bound = std::max(s0.y, y_limit);
    bool violated = false;
    State s = s0;
    for (std::size_t n = 0; n < horizon; ++n) {
      s = step_w0_unchecked(params, s);
      const double excess = s.y - bound;
      report.worst_excess = std::max(report.worst_excess, excess);
      if (excess > 1e-12) violated = true;
    }
    ++report.starts;
    if (violated && report.violations++ == 0) report.counterexample = s0;
  }
  return report;
}

double GridAxis::at(std::size_t i) const {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) /
                  static_cast<double>(count - 1);
}

BasinGrid basin_scan(const Params& params, const GridAxis& x,
                     const GridAxis& y, std::size_t budget, unsigned workers,
                     const FateThresholds& thresholds) {
  require_analysis_valid(params);
  for (const GridAxis* axis : {&x, &y}) {
    if (axis->count < 2) {
      throw ConfigurationError("basin_scan: need at least 2 nodes per axis");
    }
    if (!std::isfinite(axis->lo) || !std::isfinite(axis->hi) ||
        !(axis->hi > axis->lo)) {
      throw ConfigurationError("basin_scan: axis range must have hi > lo");
    }
    if (axis->lo < 0) {
      throw ConfigurationError("basin_scan: axis range must be nonnegative");
    }
  }

  BasinGrid grid{x, y, std::vector<BasinCell>(x.count * y.count)};
  const std::size_t total = grid.cells.size();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(1, total)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    try {
      for (std::size_t k = next++; k < total; k = next++) {
        const State s0{x.at(k % x.count), y.at(k / x.count)};
        const TrajectoryOutcome o = classify_fate(params, s0, budget, thresholds);
        grid.cells[k] = {o.verdict, o.iterations};
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

}  // namespace mosquito
