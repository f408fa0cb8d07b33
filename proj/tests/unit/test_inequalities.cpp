#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsf/errors.hpp"
#include "nsf/inequalities.hpp"

using namespace nsf;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteVectorField axial_sine(int n) {
  return DiscreteVectorField::sample(NodeGrid::box(n, n, n),
                                     [](double, double, double z) { return Vec3{0.0, 0.0, std::sin(kPi * z)}; });
}

double axial_gradient_error(int n) {
  const auto f = axial_sine(n);
  const auto g = discrete_gradient(f);
  double err = 0.0;
  for (int k = 0; k < n; ++k) {
    const double exact = kPi * std::cos(kPi * f.grid.x(2, k));
    err = std::max(err, std::abs(g[f.grid.index(n / 2, n / 2, k)][2][2] - exact));
  }
  return err;
}

}  // namespace

TEST(DiscreteGradient, ConstantFieldHasZeroGradient) {
  const auto f = DiscreteVectorField::sample(NodeGrid::box(6, 7, 8), [](double, double, double) { return Vec3{1, -2, 3}; },
                                             {false, false, false});
  for (const auto& g : discrete_gradient(f))
    for (const auto& row : g)
      for (double x : row) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(DiscreteGradient, AffineFieldIsExact) {
  const auto f = DiscreteVectorField::sample(NodeGrid::box(5, 5, 5), [](double, double y, double) { return Vec3{y, 0, 0}; },
                                             {false, false, false});
  for (const auto& g : discrete_gradient(f))
    for (int j = 0; j < 3; ++j)
      for (int d = 0; d < 3; ++d) EXPECT_NEAR(g[j][d], (j == 0 && d == 1) ? 1.0 : 0.0, 1e-12);
}

TEST(DiscreteGradient, SecondOrderOnAxialSine) {
  const double e32 = axial_gradient_error(33);
  const double e64 = axial_gradient_error(65);
  EXPECT_LT(e64, 1e-2);
  EXPECT_GT(e32 / e64, 3.0);
  EXPECT_LT(e32 / e64, 5.0);
}

TEST(KornReportTest, ZeroFieldHoldsWithEquality) {
  const auto f = DiscreteVectorField::sample(NodeGrid::box(8, 8, 8), [](double, double, double) { return Vec3{0, 0, 0}; });
  const auto r = korn_report(f);
  EXPECT_EQ(r.grad_sq, 0.0);
  EXPECT_EQ(r.sym_sq, 0.0);
  EXPECT_EQ(r.dev_sq, 0.0);
  EXPECT_EQ(r.mixed, 0.0);
  EXPECT_TRUE(r.all_hold());
}

TEST(KornReportTest, AxialSineClosedForms) {
  const auto r = korn_report(axial_sine(64));
  EXPECT_NEAR(r.grad_sq, kPi * kPi / 2.0, 0.01 * kPi * kPi / 2.0);
  EXPECT_NEAR(r.dev_sq, 4.0 * kPi * kPi / 3.0, 0.01 * 4.0 * kPi * kPi / 3.0);
  EXPECT_TRUE(r.all_hold());
  EXPECT_GT(r.sym_sq, r.grad_sq);
}

TEST(KornReportTest, MixedFormIdentity) {
  const auto f = DiscreteVectorField::sample(NodeGrid::box(32, 32, 32), [](double x, double y, double z) {
    return Vec3{std::sin(kPi * x) / kPi, std::sin(kPi * y) / kPi, std::sin(kPi * z) / kPi};
  });
  const auto r = korn_report(f);
  EXPECT_NEAR(r.mixed, r.grad_sq + r.div_sq / 3.0, r.tolerance);
}

TEST(KornReportTest, RandomCompliantFieldsAt32) {
  const NodeGrid g = NodeGrid::box(32, 32, 32);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto f = random_compliant_field(g, seed);
    EXPECT_NO_THROW(f.validate());
    EXPECT_TRUE(korn_report(f).all_hold()) << "seed " << seed;
  }
}

TEST(KornReportTest, RandomFieldIsDeterministic) {
  const NodeGrid g = NodeGrid::box(8, 8, 8);
  EXPECT_EQ(random_compliant_field(g, 7).u, random_compliant_field(g, 7).u);
  EXPECT_NE(random_compliant_field(g, 7).u, random_compliant_field(g, 8).u);
}

TEST(DiscreteVectorFieldTest, RejectsNonzeroNormalComponent) {
  const auto f = DiscreteVectorField::sample(NodeGrid::box(6, 6, 6), [](double x, double, double) { return Vec3{1.0 + x, 0, 0}; },
                                             {false, false, false});
  DiscreteVectorField g = f;
  g.normal_zero = {true, true, true};
  EXPECT_THROW(g.validate(), PreconditionError);
}

TEST(Poincare, AxialOnlyFieldHasZeroNumerator) {
  const NodeGrid g = NodeGrid::box(9, 9, 17, {0.5, 0.5, 1.0}, {-0.25, -0.25, 0.0});
  const auto f = DiscreteScalarField::sample(g, [](double, double, double y) { return std::sin(kPi * y); });
  EXPECT_NEAR(poincare_ladyzhenskaya_check(f, 0.5).numerator, 0.0, 1e-20);
}

TEST(Poincare, ZeroFieldGivesZeroRatio) {
  const NodeGrid g = NodeGrid::box(5, 5, 9);
  const auto f = DiscreteScalarField::sample(g, [](double, double, double) { return 0.0; });
  const auto r = poincare_ladyzhenskaya_check(f, 1.0);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(Poincare, BoundedByBaselineAcrossEpsilon) {
  for (int family = 0; family < 2; ++family) {
    double base = 0.0;
    for (double eps : {1.0, 0.5, 0.25, 0.125}) {
      const auto r = poincare_ladyzhenskaya_check(poincare_family(family, eps, 17, 33), eps);
      EXPECT_TRUE(std::isfinite(r.ratio));
      if (eps == 1.0) base = r.ratio;
      EXPECT_LE(r.ratio, 1.1 * base) << "family " << family << " eps " << eps;
    }
  }
}

TEST(Poincare, RejectsNonvanishingAxialTrace) {
  const NodeGrid g = NodeGrid::box(5, 5, 9);
  const auto f = DiscreteScalarField::sample(g, [](double x, double, double) { return 1.0 + x; });
  EXPECT_THROW(poincare_ladyzhenskaya_check(f, 1.0), PreconditionError);
}
