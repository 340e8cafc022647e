#include "mosquito/stability.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mosquito/errors.h"

namespace mosquito {
namespace {

bool near_unit(double modulus) {
  return std::abs(modulus - 1.0) <= kHyperbolicityTolerance;
}

double residual_of(const Params& params, State z) {
  const State image = step_w0(params, z);
  return std::max(std::abs(image.x - z.x), std::abs(image.y - z.y));
}

}  // namespace

std::array<std::complex<double>, 2> eigenvalues(const Matrix2& m) {
  if (m[0][1] == 0 || m[1][0] == 0) {
    // Triangular: the diagonal is exact.
    const double lo = std::min(m[0][0], m[1][1]);
    const double hi = std::max(m[0][0], m[1][1]);
    return {std::complex<double>(lo, 0.0), std::complex<double>(hi, 0.0)};
  }
  const double half_trace = 0.5 * (m[0][0] + m[1][1]);
  const double half_diff = 0.5 * (m[0][0] - m[1][1]);
  // Discriminant written to avoid the trace^2/4 - det cancellation.
  const double disc = half_diff * half_diff + m[0][1] * m[1][0];
  if (disc >= 0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>(half_trace - s, 0.0),
            std::complex<double>(half_trace + s, 0.0)};
  }
  const double s = std::sqrt(-disc);
  return {std::complex<double>(half_trace, -s),
          std::complex<double>(half_trace, s)};
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::Saddle: return "saddle";
    case Stability::NonHyperbolic: return "non-hyperbolic";
  }
  return "?";
}

const char* to_string(PointKind k) {
  return k == PointKind::Origin ? "origin" : "interior";
}

const char* to_string(Regime r) {
  return r == Regime::OriginOnly ? "origin-only" : "two-fixed-points";
}

std::optional<State> interior_fixed_point(const Params& params) {
  if (!has_interior_fixed_point(params)) return std::nullopt;
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  const double m = params.mu();
  return State{g * m * m / (a * (b - m) - g * m * m), g * m / (b - m)};
}

std::optional<AlphaThresholds> alpha_thresholds(const Params& params) {
  require_analysis_valid(params);
  const double b = params.beta();
  const double m = params.mu();
  if (!(b > m)) return std::nullopt;
  const double c = params.gamma() * m * m / (b - m);
  const double d = b * (2.0 - m) / (2.0 * b + m * (b - m));
  // Larger root directly (all terms positive), smaller from the root product.
  const double alpha1 = c + d + std::sqrt(d * (2.0 * c + d));
  return AlphaThresholds{alpha1, c * c / alpha1};
}

Matrix2 jacobian_at(const Params& params, State s) {
  require_analysis_valid(params);
  require_quadrant(s);
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  const double emergence_slope = a / ((1.0 + s.x) * (1.0 + s.x));
  const double birth_slope =
      b * s.y * (2.0 * g + s.y) / ((g + s.y) * (g + s.y));
  return {{{1.0 - emergence_slope, birth_slope},
           {emergence_slope, 1.0 - params.mu()}}};
}

Stability classify_generic(const Matrix2& m) {
  for (const auto& row : m) {
    for (double v : row) {
      if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
    }
  }
  const auto ev = eigenvalues(m);
  const double m0 = std::abs(ev[0]);
  const double m1 = std::abs(ev[1]);
  if (near_unit(m0) || near_unit(m1)) return Stability::NonHyperbolic;
  if (m0 < 1 && m1 < 1) return Stability::Attracting;
  if (m0 > 1 && m1 > 1) return Stability::Repelling;
  return Stability::Saddle;
}

InteriorClassification classify_interior(const Params& params) {
  require_analysis_valid(params);
  const auto z = interior_fixed_point(params);
  if (!z) {
    throw ConfigurationError(
        "classify_interior: beta <= mu (1 + gamma mu / alpha), no interior "
        "fixed point");
  }
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  const double m = params.mu();

  InteriorClassification out;
  JacobianAnalysis& an = out.analysis;
  an.matrix = jacobian_at(params, *z);
  an.eigenvalues = eigenvalues(an.matrix);
  an.A = a / ((1.0 + z->x) * (1.0 + z->x));
  an.B = b * z->y * (2.0 * g + z->y) / ((g + z->y) * (g + z->y));
  const double b_closed = b - (b - m) * (b - m) / b;
  if (std::abs(an.B - b_closed) > 1e-12 * std::max(1.0, b)) {
    throw InternalConsistencyError("B disagrees with its closed form");
  }
  const double root = std::sqrt((m - an.A) * (m - an.A) + 4.0 * an.A * an.B);
  an.Lambda1 = 0.5 * (m + an.A + root);
  // Product of roots is A (mu - B); avoids cancellation in the minus branch.
  an.Lambda2 = an.A * (m - an.B) / an.Lambda1;
  an.thresholds = alpha_thresholds(params);

  const AlphaThresholds& t = *an.thresholds;
  Stability by_threshold;
  if (std::abs(a - t.alpha1) <= kHyperbolicityTolerance ||
      std::abs(a - t.alpha2) <= kHyperbolicityTolerance) {
    by_threshold = Stability::NonHyperbolic;
  } else if (a > t.alpha1 || a < t.alpha2) {
    by_threshold = Stability::Repelling;
  } else {
    by_threshold = Stability::Saddle;
  }
  const Stability by_modulus = classify_generic(an.matrix);

  out.stability = by_threshold;
  if (by_threshold != by_modulus) {
    if (by_threshold != Stability::NonHyperbolic &&
        by_modulus != Stability::NonHyperbolic) {
      std::ostringstream msg;
      msg << "interior classification mismatch: thresholds say "
          << to_string(by_threshold) << ", eigenvalue moduli say "
          << to_string(by_modulus);
      throw InternalConsistencyError(msg.str());
    }
    out.stability = Stability::NonHyperbolic;
    an.notes.push_back(std::string("tolerance-band ambiguity: thresholds say ") +
                       to_string(by_threshold) + ", eigenvalue moduli say " +
                       to_string(by_modulus));
  }
  if (out.stability == Stability::Saddle && t.alpha1 > 1.0) {
    an.notes.push_back(
        "saddle with alpha1 > 1: the stated saddle condition alpha < alpha1 "
        "<= 1 does not hold, eigenvalue moduli confirm the saddle");
  }
  if (a < t.alpha2) {
    an.notes.push_back("alpha below alpha2");
  }
  return out;
}

FixedPointReport find_fixed_points(const Params& params) {
  require_analysis_valid(params);
  FixedPointReport report;
  report.constants = derived_constants(params);
  report.thresholds = alpha_thresholds(params);
  report.origin_eigenvalues = {1.0 - params.alpha(), 1.0 - params.mu()};

  report.origin.location = {0.0, 0.0};
  report.origin.kind = PointKind::Origin;
  report.origin.stability = classify_generic(jacobian_at(params, {0.0, 0.0}));
  report.origin.residual = residual_of(params, report.origin.location);

  if (const auto z = interior_fixed_point(params)) {
    report.regime = Regime::TwoFixedPoints;
    InteriorClassification cls = classify_interior(params);
    FixedPoint fp;
    fp.location = *z;
    fp.kind = PointKind::Interior;
    fp.stability = cls.stability;
    fp.residual = residual_of(params, *z);
    report.interior = fp;
    report.analysis = std::move(cls.analysis);
  }
  return report;
}

}  // namespace mosquito
