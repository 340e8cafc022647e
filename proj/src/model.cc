#include "mosquito/model.h"

#include <cmath>
#include <string>

#include "mosquito/errors.h"

namespace mosquito {
namespace {

// Relative width of the band around the existence threshold inside which the
// two algebraically equivalent tests may legitimately round differently.
constexpr double kThresholdBand = 1e-12;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Params::Params(const ParamValues& values) : v_(values) {
  const auto positive = [](double v) { return finite(v) && v > 0; };
  const auto nonnegative = [](double v) { return finite(v) && v >= 0; };
  if (!positive(v_.alpha)) throw ConfigurationError("alpha must be > 0");
  if (!positive(v_.beta)) throw ConfigurationError("beta must be > 0");
  if (!positive(v_.gamma)) throw ConfigurationError("gamma must be > 0");
  if (!positive(v_.mu)) throw ConfigurationError("mu must be > 0");
  if (!nonnegative(v_.d0)) throw ConfigurationError("d0 must be >= 0");
  if (!nonnegative(v_.d1)) throw ConfigurationError("d1 must be >= 0");
}

bool Params::analysis_valid() const {
  return v_.alpha <= 1.0 && v_.mu <= 1.0 && v_.d0 == 0.0 && v_.d1 == 0.0;
}

bool in_quadrant(State s) {
  return finite(s.x) && finite(s.y) && s.x >= 0 && s.y >= 0;
}

void require_quadrant(State s) {
  if (!finite(s.x) || !finite(s.y)) {
    throw DomainError("state coordinates must be finite");
  }
  if (s.x < 0 || s.y < 0) {
    throw DomainError("state must lie in the nonnegative quadrant");
  }
}

void require_analysis_valid(const Params& params) {
  if (!params.analysis_valid()) {
    throw ConfigurationError(
        "analysis requires 0 < alpha <= 1, 0 < mu <= 1 and d0 = d1 = 0");
  }
}

double k_response(double x) {
  if (!(x >= 0)) throw DomainError("k_response: x must be >= 0");
  return x / (1.0 + x);
}

double allee_birth_rate(const Params& params, double y) {
  if (!(y >= 0)) throw DomainError("allee_birth_rate: y must be >= 0");
  return params.beta() * y / (params.gamma() + y);
}

Increment w0_increment(const Params& params, State s) {
  require_analysis_valid(params);
  require_quadrant(s);
  return internal::w0_increment_unchecked(params, s);
}

GeneralStep step_general(const Params& params, State s) {
  if (!finite(s.x) || !finite(s.y)) {
    throw DomainError("step_general: state coordinates must be finite");
  }
  // Same evaluation order as w0_increment so that d0 = d1 = 0 reproduces
  // step_w0 bit for bit.
  const double birth = params.beta() * s.y / (params.gamma() + s.y) * s.y;
  const double emergence = params.alpha() * (s.x / (1.0 + s.x));
  const double death = (params.d0() + params.d1() * s.x) * s.x;
  const double dx = birth - emergence - death;
  const double dy = emergence - params.mu() * s.y;
  GeneralStep out;
  out.image = {s.x + dx, s.y + dy};
  out.in_quadrant = in_quadrant(out.image);
  return out;
}

State step_w0(const Params& params, State s) {
  const Increment inc = w0_increment(params, s);
  return {s.x + inc.dx, s.y + inc.dy};
}

DerivedConstants derived_constants(const Params& params) {
  require_analysis_valid(params);
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  const double m = params.mu();

  DerivedConstants out;
  out.threshold_beta = m * (1.0 + g * m / a);
  out.y_limit = a / m;
  if (b > m) {
    out.allee_threshold_gamma = a * (b - m) / (m * m);
    const bool by_beta = b > out.threshold_beta;
    const bool by_gamma = g < *out.allee_threshold_gamma;
    const bool near_boundary =
        std::abs(b - out.threshold_beta) <= kThresholdBand * b;
    if (by_beta != by_gamma && !near_boundary) {
      throw InternalConsistencyError(
          "existence threshold: beta and gamma forms disagree");
    }
  }
  return out;
}

std::optional<double> interior_adult_density(const Params& params) {
  const double b = params.beta();
  const double m = params.mu();
  if (!(b > m)) return std::nullopt;
  return params.gamma() * m / (b - m);
}

bool has_interior_fixed_point(const Params& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  const double m = params.mu();
  const double threshold = m * (1.0 + g * m / a);
  // The denominator of x* must also be strictly positive in floating point.
  return b > threshold && a * (b - m) - g * m * m > 0;
}

}  // namespace mosquito
