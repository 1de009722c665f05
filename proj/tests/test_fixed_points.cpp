#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "ricker/fixed_points.hpp"
#include "test_support.hpp"

namespace ricker {
namespace {

using testing::reference;
using testing::reference_coefficients;

TEST(ExistenceThreshold, ReferenceValue) {
  const auto r_min = existence_threshold(reference_coefficients());
  ASSERT_TRUE(r_min.has_value());
  EXPECT_NEAR(*r_min, 0.4, 1e-15);
}

TEST(ExistenceThreshold, AbsentOnBoundary) {
  EXPECT_FALSE(existence_threshold(Coefficients(1.0, 1.0, 0.5, 0.5)).has_value());
  EXPECT_FALSE(existence_threshold(Coefficients(1.0, 2.0, 0.5, 0.5)).has_value());
}

TEST(SolvePositive, ReferencePointAtUnitR) {
  const auto p = reference(1.0);
  const PositiveFixedPoint fp = solve_positive(p);
  EXPECT_NEAR(fp.x_star, 0.6930, 1e-3);
  EXPECT_NEAR(fp.y_star, 0.3991, 1e-3);
  EXPECT_LE(fp.residual, 1e-12);
  const State img = step(p, fp.state());
  EXPECT_NEAR(img.x, fp.x_star, 1e-12);
  EXPECT_NEAR(img.y, fp.y_star, 1e-12);
}

TEST(SolvePositive, InvariantsOnRandomParameters) {
  auto rng = testing::make_rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto k = testing::random_coexistence_coefficients(rng);
    const double r_min = *existence_threshold(k);
    const double r = r_min + testing::uniform(rng, 1e-3, 6.0);
    const PositiveFixedPoint fp = solve_positive(ModelParams(r, k));
    ASSERT_GT(fp.x_star, 0.0);
    ASSERT_LT(fp.x_star, r);
    ASSERT_GT(fp.y_star, 0.0);
    EXPECT_LE(std::abs(zeta_inverse(k, fp.x_star) - r), 1e-12 * std::max(1.0, r));
    EXPECT_NEAR(fp.y_star, predator_from_prey(k, fp.x_star), 1e-12 * std::max(1.0, fp.y_star));
    EXPECT_GE(fp.x_star, fp.bracket.first);
    EXPECT_LE(fp.x_star, fp.bracket.second);
  }
}

TEST(SolvePositive, NoPointBelowThreshold) {
  EXPECT_THROW(solve_positive(reference(0.3)), NoPositiveFixedPoint);
  EXPECT_THROW(solve_positive(reference(0.4)), NoPositiveFixedPoint);
  try {
    solve_positive(ModelParams::make(2.0, 1.0, 1.0, 0.5, 0.5));
    FAIL();
  } catch (const NoPositiveFixedPoint& e) {
    EXPECT_NE(std::string(e.what()).find("c*b0 > (1-s)*gamma"), std::string::npos) << e.what();
  }
}

// Brute-force scan of zeta^{-1}(x) - r on (x_hat, r): exactly one sign change.
TEST(SolvePositive, UniqueRootByScan) {
  auto rng = testing::make_rng(12);
  for (int i = 0; i < 1000; ++i) {
    const auto k = testing::random_coexistence_coefficients(rng);
    const double x_hat = *existence_threshold(k);
    const double r = x_hat + testing::uniform(rng, 1e-2, 6.0);
    int changes = 0;
    double prev = zeta_inverse(k, x_hat + (r - x_hat) * 1e-6) - r;
    for (int j = 1; j <= 10000; ++j) {
      const double x = x_hat + (r - x_hat) * j / 10000.0;
      const double v = zeta_inverse(k, x) - r;
      if ((v > 0) != (prev > 0)) ++changes;
      prev = v;
    }
    ASSERT_EQ(changes, 1) << "sample " << i;
  }
}

TEST(SolvePositive, BranchIncreasesWithR) {
  double prev = 0.0;
  for (int j = 1; j <= 400; ++j) {
    const double r = 0.4 + 0.01 * j;
    const double x = solve_positive(reference(r)).x_star;
    EXPECT_GT(x, prev);
    prev = x;
  }
}

TEST(SolvePositive, FlipPointHasVanishingJuryA) {
  const auto p = reference(2.7732854597020826);
  EXPECT_NEAR(classify_positive(p, solve_positive(p)).jury_a, 0.0, 1e-6);
}

TEST(ClassifyTrivial, Cases) {
  EXPECT_EQ(classify_trivial(reference(-0.5)).classification, Stability::stable);
  EXPECT_TRUE(classify_trivial(reference(-0.5)).globally_stable);
  EXPECT_EQ(classify_trivial(reference(0.5)).classification, Stability::unstable);
  EXPECT_TRUE(classify_trivial(reference(0.0)).non_hyperbolic);
  EXPECT_FALSE(classify_trivial(reference(0.5)).non_hyperbolic);
}

TEST(ClassifyPredatorFree, Cases) {
  const StabilityReport low = classify_predator_free(reference(0.3));
  EXPECT_EQ(low.classification, Stability::stable);
  EXPECT_TRUE(low.globally_stable);
  EXPECT_EQ(classify_predator_free(reference(1.0)).classification, Stability::unstable);
  EXPECT_EQ(classify_predator_free(ModelParams::make(2.5, 0.01, 1.0, 0.5, 0.5)).classification,
            Stability::unstable);
  EXPECT_THROW(classify_predator_free(reference(0.0)), std::invalid_argument);
}

TEST(ClassifyPositive, StableAtUnitRUnstableAtThree) {
  const auto p1 = reference(1.0);
  EXPECT_EQ(classify_positive(p1, solve_positive(p1)).classification, Stability::stable);
  const auto p3 = reference(3.0);
  EXPECT_EQ(classify_positive(p3, solve_positive(p3)).classification, Stability::unstable);
}

TEST(JuryReport, FlipBoundaryWithinTolerance) {
  Mat2 J;
  J(0, 0) = -1.0;
  J(1, 1) = 0.5;
  EXPECT_EQ(jury_report(J).classification, Stability::flip_boundary);
  EXPECT_TRUE(jury_report(J).non_hyperbolic);
}

struct RandomPositive {
  ModelParams params;
  PositiveFixedPoint fp;
};

std::vector<RandomPositive> random_positive_points(std::size_t n, std::uint64_t salt) {
  auto rng = testing::make_rng(salt);
  std::vector<RandomPositive> out;
  while (out.size() < n) {
    const auto k = testing::random_coexistence_coefficients(rng);
    const double r = *existence_threshold(k) + testing::uniform(rng, 1e-3, 5.0);
    const ModelParams p(r, k);
    out.push_back({p, solve_positive(p)});
  }
  return out;
}

TEST(Jury, BAndCPositiveAtEveryPositivePoint) {
  for (const auto& [p, fp] : random_positive_points(1000, 13)) {
    const StabilityReport rep = classify_positive(p, fp);
    EXPECT_GT(rep.jury_b, 0.0) << "r=" << p.r();
    EXPECT_GT(rep.jury_c, 0.0) << "r=" << p.r();
  }
}

TEST(Jury, ComplexEigenvaluesStayInsideUnitCircle) {
  int complex_cases = 0;
  for (const auto& [p, fp] : random_positive_points(1000, 14)) {
    const Mat2 J = jacobian(p, fp.state());
    const auto ev = eigenvalues(J);
    if (ev[0].imag() != 0.0) {
      ++complex_cases;
      EXPECT_LT(std::abs(det(J)), 1.0);
    }
  }
  EXPECT_GT(complex_cases, 0);
}

TEST(Jury, ClassificationMatchesEigenvalueModuli) {
  for (const auto& [p, fp] : random_positive_points(1000, 15)) {
    const StabilityReport rep = classify_positive(p, fp);
    const double rho = spectral_radius(jacobian(p, fp.state()));
    if (std::abs(rho - 1.0) <= 1e-9) continue;
    if (rep.classification == Stability::flip_boundary) continue;
    EXPECT_EQ(rep.classification == Stability::stable, rho < 1.0) << "r=" << p.r() << " rho=" << rho;
  }
}

TEST(LocalCriterion, ReferenceThreshold) {
  const auto k = reference_coefficients();
  EXPECT_NEAR(local_criterion_threshold(k), 2.0 + std::log(2.0), 1e-14);
  EXPECT_TRUE(sufficient_local_criterion(reference(2.5)));
  EXPECT_FALSE(sufficient_local_criterion(reference(2.7)));
}

TEST(LocalCriterion, RTwoAlwaysQualifies) {
  auto rng = testing::make_rng(16);
  int tested = 0;
  while (tested < 200) {
    const auto k = testing::random_coexistence_coefficients(rng);
    if (2 * k.c() * k.b0() < (1 - k.s()) * (1 + 2 * k.gamma())) continue;
    EXPECT_TRUE(sufficient_local_criterion(ModelParams(2.0, k)));
    ++tested;
  }
}

TEST(LocalCriterion, ImpliesStability) {
  for (const auto& [p, fp] : random_positive_points(1000, 17)) {
    if (!sufficient_local_criterion(p)) continue;
    EXPECT_NE(classify_positive(p, fp).classification, Stability::unstable) << "r=" << p.r();
  }
}

TEST(GlobalCriterion, Cases) {
  EXPECT_FALSE(global_stability_criterion(reference(1.2)));
  EXPECT_FALSE(global_stability_criterion(reference(0.5)));
  EXPECT_TRUE(global_stability_criterion(reference(1.0)));
}

TEST(CorollaryWindow, ReferenceWindow) {
  const auto w = corollary_sufficient_window(reference_coefficients());
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(w->lo, 0.8184, 1e-3);
  EXPECT_DOUBLE_EQ(w->hi, 1.0);
  EXPECT_TRUE(w->lo_open);
  EXPECT_FALSE(w->hi_open);
}

TEST(CorollaryWindow, InsideGlobalCriterionRegion) {
  const auto w = corollary_sufficient_window(reference_coefficients());
  ASSERT_TRUE(w.has_value());
  for (int j = 0; j < 100; ++j) {
    const double r = w->lo + (w->hi - w->lo) * (j + 0.5) / 100.0;
    EXPECT_TRUE(global_stability_criterion(reference(r))) << "r=" << r;
  }
}

TEST(CorollaryWindow, AbsentWhenThresholdExceedsOne) {
  // r_min = 0.5 / (0.6 - 0.5 * 1) = 5
  EXPECT_FALSE(corollary_sufficient_window(Coefficients(1.2, 1.0, 0.5, 0.5)).has_value());
}

}  // namespace
}  // namespace ricker
