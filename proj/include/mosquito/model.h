#pragma once

#include <optional>

namespace mosquito {

/// Raw model constants. All rates are per time step.
struct ParamValues {
  double alpha = 0;  ///< maximum larval emergence rate
  double beta = 0;   ///< adult birth (oviposition) rate
  double gamma = 0;  ///< Allee-effect constant, in population units
  double mu = 0;     ///< adult death rate
  double d0 = 0;     ///< density-independent larval death rate
  double d1 = 0;     ///< density-dependent larval death coefficient

  bool operator==(const ParamValues&) const = default;
};

/// Validated model constants. Construction only enforces positivity of
/// (alpha, beta, gamma, mu) and nonnegativity of (d0, d1); the stricter regime
/// needed by the analysis routines is exposed through analysis_valid().
class Params {
 public:
  /// Throws ConfigurationError on non-finite, non-positive or negative values.
  explicit Params(const ParamValues& values);

  double alpha() const { return v_.alpha; }
  double beta() const { return v_.beta; }
  double gamma() const { return v_.gamma; }
  double mu() const { return v_.mu; }
  double d0() const { return v_.d0; }
  double d1() const { return v_.d1; }
  const ParamValues& values() const { return v_; }

  /// 0 < alpha <= 1, 0 < mu <= 1 and no larval death terms. Inside this
  /// regime the reduced operator maps the closed quadrant to itself.
  bool analysis_valid() const;

  bool operator==(const Params&) const = default;

 private:
  ParamValues v_;
};

/// Population point: larvae x, adults y.
struct State {
  double x = 0;
  double y = 0;

  bool operator==(const State&) const = default;
};

/// True iff both coordinates are finite and nonnegative.
bool in_quadrant(State s);

/// Throws DomainError unless in_quadrant(s).
void require_quadrant(State s);

/// Throws ConfigurationError unless params.analysis_valid().
void require_analysis_valid(const Params& params);

struct DerivedConstants {
  double threshold_beta = 0;  ///< mu (1 + gamma mu / alpha)
  double y_limit = 0;         ///< alpha / mu
  /// alpha (beta - mu) / mu^2; absent when beta <= mu.
  std::optional<double> allee_threshold_gamma;

  bool operator==(const DerivedConstants&) const = default;
};

/// Larval competition response x / (1 + x). Throws DomainError for x < 0.
double k_response(double x);

/// Allee-limited birth rate beta y / (gamma + y). Throws DomainError for y < 0.
double allee_birth_rate(const Params& params, double y);

/// Increment (x' - x, y' - y) of the reduced operator. step_w0 adds exactly
/// these values to the state.
struct Increment {
  double dx = 0;
  double dy = 0;
};

Increment w0_increment(const Params& params, State s);

struct GeneralStep {
  State image;
  /// False when the image left the quadrant or overflowed. The image is
  /// never clamped.
  bool in_quadrant = true;
};

/// One step of the general operator including larval death terms. Accepts any
/// finite state; throws DomainError otherwise.
GeneralStep step_general(const Params& params, State s);

/// One step of the reduced operator (d0 = d1 = 0). Requires analysis-valid
/// parameters and a state in the quadrant.
State step_w0(const Params& params, State s);

/// Existence threshold, adult limit and Allee threshold. Throws
/// ConfigurationError unless analysis-valid, and InternalConsistencyError if
/// the two equivalent forms of the existence test disagree.
DerivedConstants derived_constants(const Params& params);

/// gamma mu / (beta - mu), the adult density of the interior equilibrium.
/// Absent when beta <= mu.
std::optional<double> interior_adult_density(const Params& params);

/// beta > mu (1 + gamma mu / alpha), i.e. the interior fixed point exists.
bool has_interior_fixed_point(const Params& params);

namespace internal {

// Unchecked variants for hot loops; callers validate arguments once.
inline Increment w0_increment_unchecked(const Params& p, State s) {
  const double birth = p.beta() * s.y / (p.gamma() + s.y) * s.y;
  const double emergence = p.alpha() * (s.x / (1.0 + s.x));
  return {birth - emergence, emergence - p.mu() * s.y};
}

inline State step_w0_unchecked(const Params& p, State s) {
  const Increment inc = w0_increment_unchecked(p, s);
  return {s.x + inc.dx, s.y + inc.dy};
}

}  // namespace internal

}  // namespace mosquito
