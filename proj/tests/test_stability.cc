#include <gtest/gtest.h>

#include <cmath>

#include "mosquito/errors.h"
#include "mosquito/stability.h"
#include "oracles.h"

using namespace mosquito;

namespace {
const ParamValues kExample{0.8, 0.9, 2, 0.4};

Eigen::Matrix2d to_eigen(const Matrix2& m) {
  Eigen::Matrix2d e;
  e << m[0][0], m[0][1], m[1][0], m[1][1];
  return e;
}
}  // namespace

TEST(FixedPoints, ExampleInterior) {
  const FixedPointReport r = find_fixed_points(Params(kExample));
  EXPECT_EQ(r.regime, Regime::TwoFixedPoints);
  ASSERT_TRUE(r.interior);
  EXPECT_NEAR(r.interior->location.x, 4, 1e-12);
  EXPECT_NEAR(r.interior->location.y, 1.6, 1e-12);
  EXPECT_LE(r.interior->residual, 1e-12);
  EXPECT_EQ(r.interior->stability, Stability::Saddle);
  EXPECT_EQ(r.origin.stability, Stability::Attracting);
  EXPECT_EQ(r.origin.location, (State{0, 0}));
  EXPECT_NEAR(r.origin_eigenvalues[0], 0.2, 1e-15);
  EXPECT_NEAR(r.origin_eigenvalues[1], 0.6, 1e-15);
  ASSERT_TRUE(r.analysis);
}

TEST(FixedPoints, OriginOnlyCases) {
  for (const ParamValues& v : {ParamValues{0.8, 0.8, 2, 0.4},
                               ParamValues{1, 0.5, 1, 1},
                               ParamValues{0.8, 0.7, 2, 0.4}}) {
    const FixedPointReport r = find_fixed_points(Params(v));
    EXPECT_EQ(r.regime, Regime::OriginOnly);
    EXPECT_FALSE(r.interior);
    EXPECT_FALSE(r.analysis);
    EXPECT_EQ(r.origin.stability, Stability::Attracting);
  }
  EXPECT_FALSE(interior_fixed_point(Params({0.8, 0.8, 2, 0.4})));
}

TEST(FixedPoints, ThresholdsReportedBetweenDeathRateAndExistence) {
  // beta > mu but below the existence threshold
  const FixedPointReport r = find_fixed_points(Params({0.8, 0.7, 2, 0.4}));
  EXPECT_TRUE(r.thresholds);
  EXPECT_FALSE(find_fixed_points(Params({1, 0.5, 1, 1})).thresholds);
}

TEST(FixedPoints, SweepResidualsAndRegime) {
  oracle::ParamSampler rng(21);
  for (int i = 0; i < 1000; ++i) {
    const ParamValues v = rng.above_threshold();
    const FixedPointReport r = find_fixed_points(Params(v));
    ASSERT_EQ(r.regime, Regime::TwoFixedPoints);
    const auto ref = oracle::interior(v);
    const State s = r.interior->location;
    EXPECT_NEAR(s.x, ref[0], 1e-9 * std::max(1.0, ref[0]));
    EXPECT_NEAR(s.y, ref[1], 1e-12 * std::max(1.0, ref[1]));
    const auto img = oracle::map(v, s.x, s.y);
    const double scale = std::max({1.0, s.x, s.y});
    EXPECT_LE(std::abs(img[0] - s.x), 1e-12 * scale);
    EXPECT_LE(std::abs(img[1] - s.y), 1e-12 * scale);
    EXPECT_NE(r.interior->stability, Stability::Attracting);
    EXPECT_EQ(r.origin.stability, Stability::Attracting);
  }
  for (int i = 0; i < 300; ++i) {
    EXPECT_EQ(find_fixed_points(Params(rng.below_threshold())).regime,
              Regime::OriginOnly);
  }
}

TEST(Eigenvalues, RealComplexAndOrdering) {
  const auto d = eigenvalues({{{2, 0}, {0, 0.5}}});
  EXPECT_EQ(d[0], std::complex<double>(0.5, 0));
  EXPECT_EQ(d[1], std::complex<double>(2, 0));
  const auto rot = eigenvalues({{{0, -1}, {1, 0}}});
  EXPECT_NEAR(rot[0].imag(), -1, 1e-15);
  EXPECT_NEAR(rot[1].imag(), 1, 1e-15);
  EXPECT_NEAR(std::abs(rot[0]), 1, 1e-15);
}

TEST(Eigenvalues, AgreeWithEigenSolver) {
  oracle::ParamSampler rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Matrix2 m{{{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                     {rng.uniform(-3, 3), rng.uniform(-3, 3)}}};
    const auto ours = eigenvalues(m);
    std::array<double, 2> mod{std::abs(ours[0]), std::abs(ours[1])};
    std::sort(mod.begin(), mod.end());
    const auto ref = oracle::moduli(to_eigen(m));
    EXPECT_NEAR(mod[0], ref[0], 1e-12 * std::max(1.0, ref[1]));
    EXPECT_NEAR(mod[1], ref[1], 1e-12 * std::max(1.0, ref[1]));
  }
}

TEST(ClassifyGeneric, Examples) {
  EXPECT_EQ(classify_generic({{{0.5, 0}, {0, 0.5}}}), Stability::Attracting);
  EXPECT_EQ(classify_generic({{{2, 0}, {0, 0.5}}}), Stability::Saddle);
  EXPECT_EQ(classify_generic({{{2, 0}, {0, -3}}}), Stability::Repelling);
  EXPECT_EQ(classify_generic({{{0, -1}, {1, 0}}}), Stability::NonHyperbolic);
  EXPECT_EQ(classify_generic({{{1 + 1e-10, 0}, {0, 0.2}}}),
            Stability::NonHyperbolic);
  EXPECT_THROW(classify_generic({{{std::nan(""), 0}, {0, 1}}}), DomainError);
}

TEST(Jacobian, OriginAndExample) {
  const Params p(kExample);
  const Matrix2 o = jacobian_at(p, {0, 0});
  EXPECT_NEAR(o[0][0], 0.2, 1e-15);
  EXPECT_EQ(o[0][1], 0);
  EXPECT_NEAR(o[1][0], 0.8, 1e-15);
  EXPECT_NEAR(o[1][1], 0.6, 1e-15);

  const Matrix2 j = jacobian_at(p, {4, 1.6});
  EXPECT_NEAR(j[1][0], 0.032, 1e-15);
  EXPECT_THROW(jacobian_at(p, {std::nan(""), 1}), DomainError);
  EXPECT_THROW(jacobian_at(p, {-1, 1}), DomainError);
  EXPECT_THROW(jacobian_at(Params({1.5, 1, 1, 0.5}), {1, 1}),
               ConfigurationError);
}

TEST(Jacobian, SharedEntryIdentity) {
  oracle::ParamSampler rng(6);
  for (int i = 0; i < 200; ++i) {
    const Params p(rng.above_threshold());
    const Matrix2 j = jacobian_at(p, {rng.uniform(0, 20), rng.uniform(0, 20)});
    EXPECT_EQ(j[0][0], 1 - j[1][0]);
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  oracle::ParamSampler rng(7);
  for (int i = 0; i < 100; ++i) {
    const ParamValues v = rng.above_threshold();
    const double x = rng.uniform(0.01, 20), y = rng.uniform(0.01, 20);
    const Eigen::Matrix2d fd = oracle::jacobian_fd(v, x, y, 1e-6);
    const Eigen::Matrix2d an = to_eigen(jacobian_at(Params(v), {x, y}));
    EXPECT_LE((an - fd).norm() / an.norm(), 1e-6) << "at " << x << ", " << y;
  }
}

TEST(AlphaThresholds, ExampleValues) {
  const auto t = alpha_thresholds(Params(kExample));
  ASSERT_TRUE(t);
  EXPECT_NEAR(t->alpha1, 2.56, 1e-9);
  EXPECT_NEAR(t->alpha2, 0.16, 1e-9);
  const auto roots = oracle::alpha_quadratic_roots(0.9, 2, 0.4);
  EXPECT_NEAR(roots.upper, 2.56, 1e-9);
  EXPECT_NEAR(roots.lower, 0.16, 1e-9);
  EXPECT_FALSE(alpha_thresholds(Params({1, 0.5, 1, 1})));
}

TEST(AlphaThresholds, MatchBisectionOracle) {
  oracle::ParamSampler rng(9);
  for (int i = 0; i < 500; ++i) {
    const ParamValues v = rng.above_threshold();
    const auto t = alpha_thresholds(Params(v));
    ASSERT_TRUE(t);
    const auto roots = oracle::alpha_quadratic_roots(v.beta, v.gamma, v.mu);
    EXPECT_NEAR(t->alpha1, roots.upper, 1e-9 * std::max(1.0, roots.upper));
    EXPECT_NEAR(t->alpha2, roots.lower, 1e-9 * std::max(1.0, roots.upper));
    const double c = v.gamma * v.mu * v.mu / (v.beta - v.mu);
    EXPECT_NEAR(t->alpha1 * t->alpha2, c * c, 1e-12 * std::max(1.0, c * c));
  }
}

// alpha1 is where the larger Lambda root of the interior Jacobian crosses 2,
// found here by varying alpha with the other constants held fixed.
TEST(AlphaThresholds, UpperRootIsWhereLambdaCrossesTwo) {
  oracle::ParamSampler rng(10);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 50; ++i) {
    ParamValues v = rng.above_threshold();
    const auto t = alpha_thresholds(Params(v));
    const double c = v.gamma * v.mu * v.mu / (v.beta - v.mu);
    if (t->alpha1 > 50) continue;
    const auto f = [&](double a) {
      ParamValues w = v;
      w.alpha = a;
      return oracle::largest_lambda(w) - 2;
    };
    const double lo = c * (1 + 1e-9) + 1e-12, hi = 2 * t->alpha1 + 1;
    if (f(lo) >= 0 || f(hi) <= 0) continue;
    EXPECT_NEAR(oracle::bisect(f, lo, hi), t->alpha1,
                1e-8 * std::max(1.0, t->alpha1));
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(ClassifyInterior, ExampleIsSaddleAndModuliStraddleOne) {
  const InteriorClassification c = classify_interior(Params(kExample));
  EXPECT_EQ(c.stability, Stability::Saddle);
  EXPECT_NEAR(c.analysis.A, 0.032, 1e-15);
  EXPECT_NEAR(c.analysis.B, 0.9 - 0.25 / 0.9, 1e-12);
  // Lambda1 is the larger root, so its eigenvalue is the contracting one.
  const double m1 = std::abs(1 - c.analysis.Lambda1);
  const double m2 = std::abs(1 - c.analysis.Lambda2);
  EXPECT_LT(m1, 1);
  EXPECT_GT(m2, 1);
  const auto ref = oracle::moduli(to_eigen(jacobian_at(Params(kExample), {4, 1.6})));
  EXPECT_LT(ref[0], 1);
  EXPECT_GT(ref[1], 1);
  EXPECT_FALSE(c.analysis.notes.empty());  // alpha1 > 1
}

TEST(ClassifyInterior, RequiresInteriorPoint) {
  EXPECT_THROW(classify_interior(Params({0.8, 0.7, 2, 0.4})),
               ConfigurationError);
}

TEST(ClassifyInterior, RepellingCaseInsideRegime) {
  // mu = 1 with a large birth rate pushes alpha1 below 1.
  const Params p({0.9, 20, 0.1, 1});
  const auto t = alpha_thresholds(p);
  ASSERT_TRUE(t);
  ASSERT_LT(t->alpha1, 0.9);
  const InteriorClassification c = classify_interior(p);
  EXPECT_EQ(c.stability, Stability::Repelling);
  const State s = *interior_fixed_point(p);
  const auto ref = oracle::moduli(to_eigen(jacobian_at(p, s)));
  EXPECT_GT(ref[0], 1);
}

TEST(ClassifyInterior, NonHyperbolicAtThreshold) {
  // Choose alpha equal to alpha1 for fixed (beta, gamma, mu) by fixed-point
  // iteration; alpha1 does not depend on alpha.
  const ParamValues base{0.5, 20, 0.1, 1};
  const double a1 = alpha_thresholds(Params(base))->alpha1;
  ParamValues v = base;
  v.alpha = a1;
  EXPECT_EQ(classify_interior(Params(v)).stability, Stability::NonHyperbolic);
}

TEST(ClassifyInterior, ThresholdAndModuliAgreeOnSweep) {
  oracle::ParamSampler rng(12);
  for (int i = 0; i < 2000; ++i) {
    ParamValues v = rng.above_threshold();
    if (i % 3 == 0) {
      v.mu = rng.uniform(0.9, 1.0);
      v.beta = v.mu * (1 + v.gamma * v.mu / v.alpha) * rng.uniform(5, 60);
    }
    const Params p(v);
    const auto t = alpha_thresholds(p);
    if (std::abs(v.alpha - t->alpha1) <= 1e-8 ||
        std::abs(v.alpha - t->alpha2) <= 1e-8) {
      continue;
    }
    const InteriorClassification c = classify_interior(p);
    const auto ref =
        oracle::moduli(to_eigen(jacobian_at(p, *interior_fixed_point(p))));
    const Stability by_moduli = ref[1] < 1   ? Stability::Attracting
                                : ref[0] > 1 ? Stability::Repelling
                                             : Stability::Saddle;
    if (std::abs(ref[0] - 1) <= 1e-9 || std::abs(ref[1] - 1) <= 1e-9) continue;
    EXPECT_EQ(c.stability, by_moduli);
    EXPECT_EQ(c.stability,
              v.alpha > t->alpha1 ? Stability::Repelling : Stability::Saddle);
    EXPECT_NEAR(c.analysis.B, v.beta - (v.beta - v.mu) * (v.beta - v.mu) / v.beta,
                1e-12 * std::max(1.0, v.beta));
  }
}
