#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mosquito/model.h"

namespace mosquito {

/// Row-major 2x2 matrix: m[row][col].
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Eigenvalues of a real 2x2 matrix, ordered by ascending real part (a complex
/// conjugate pair is ordered by ascending imaginary part).
std::array<std::complex<double>, 2> eigenvalues(const Matrix2& m);

/// Tolerance for |modulus - 1| and for |alpha - alpha_i| when deciding
/// non-hyperbolicity.
inline constexpr double kHyperbolicityTolerance = 1e-9;

enum class Stability { Attracting, Repelling, Saddle, NonHyperbolic };
enum class PointKind { Origin, Interior };
enum class Regime { OriginOnly, TwoFixedPoints };

const char* to_string(Stability s);
const char* to_string(PointKind k);
const char* to_string(Regime r);

struct FixedPoint {
  State location;
  PointKind kind = PointKind::Origin;
  Stability stability = Stability::Attracting;
  /// max-norm of step_w0(location) - location
  double residual = 0;

  bool operator==(const FixedPoint&) const = default;
};

/// Roots of the alpha-quadratic that separates saddle from repelling interior
/// points; alpha1 >= alpha2 > 0 and alpha1 * alpha2 = (gamma mu^2/(beta-mu))^2.
struct AlphaThresholds {
  double alpha1 = 0;
  double alpha2 = 0;

  bool operator==(const AlphaThresholds&) const = default;
};

struct JacobianAnalysis {
  Matrix2 matrix{};
  /// eigenvalues[i] = 1 - Lambda_{i+1}
  std::array<std::complex<double>, 2> eigenvalues{};
  double A = 0;
  double B = 0;
  double Lambda1 = 0;
  double Lambda2 = 0;
  std::optional<AlphaThresholds> thresholds;
  std::vector<std::string> notes;

  bool operator==(const JacobianAnalysis&) const = default;
};

struct FixedPointReport {
  Regime regime = Regime::OriginOnly;
  FixedPoint origin;
  std::optional<FixedPoint> interior;
  /// Present iff interior is present.
  std::optional<JacobianAnalysis> analysis;
  std::array<double, 2> origin_eigenvalues{};  ///< (1 - alpha, 1 - mu)
  DerivedConstants constants;
  /// Reported whenever beta > mu, even without an interior point.
  std::optional<AlphaThresholds> thresholds;

  bool operator==(const FixedPointReport&) const = default;
};

/// Closed-form interior point (x*, y*); absent in the origin-only regime.
std::optional<State> interior_fixed_point(const Params& params);

/// Requires analysis-valid parameters. Absent when beta <= mu.
std::optional<AlphaThresholds> alpha_thresholds(const Params& params);

FixedPointReport find_fixed_points(const Params& params);

/// Partial derivatives of the reduced operator at s.
Matrix2 jacobian_at(const Params& params, State s);

/// Classification by eigenvalue moduli alone.
Stability classify_generic(const Matrix2& m);

struct InteriorClassification {
  Stability stability = Stability::Saddle;
  JacobianAnalysis analysis;
};

/// Classifies the interior fixed point from the alpha thresholds and
/// cross-checks against the eigenvalue moduli of the Jacobian. Throws
/// ConfigurationError if no interior point exists and
/// InternalConsistencyError if the two routes disagree outside the
/// tolerance bands.
InteriorClassification classify_interior(const Params& params);

}  // namespace mosquito
