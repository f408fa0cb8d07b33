#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nsf/errors.hpp"
#include "nsf/sampling.hpp"
#include "nsf/thermo.hpp"

using namespace nsf;

namespace {

ThermoModel default_model() { return ThermoModel{}; }

// Entropy shifted by 0.1 Z with Z = rho / theta^{3/2}; breaks the Gibbs relation.
struct CorruptedEntropy {
  ThermoModel m;
  double pressure(double rho, double theta) const { return m.pressure(rho, theta); }
  double internal_energy(double rho, double theta) const { return m.internal_energy(rho, theta); }
  double entropy(double rho, double theta) const {
    return m.entropy(rho, theta) + 0.1 * rho / std::pow(theta, 1.5);
  }
};

}  // namespace

TEST(ThermoPressure, VanishingDensityLeavesRadiation) {
  const auto m = default_model();
  EXPECT_NEAR(m.pressure(1e-12, 1.0), 1.0 / 3.0, 1e-9);
}

TEST(ThermoPressure, ReferencePoint) {
  const auto m = default_model();
  EXPECT_NEAR(m.pressure(1.0, 1.0), 7.0 / 3.0, 1e-14);
}

TEST(ThermoPressure, DensityDerivativeMatchesFiniteDifference) {
  const auto m = default_model();
  const double h = 1e-5;
  const double fd = (m.pressure(1.0 + h, 1.0) - m.pressure(1.0 - h, 1.0)) / (2 * h);
  EXPECT_NEAR(m.dp_drho(1.0, 1.0), 8.0 / 3.0, 1e-14);
  EXPECT_NEAR(fd, 8.0 / 3.0, 1e-6);
}

TEST(ThermoEnergy, ReferencePointAndStability) {
  const auto m = default_model();
  EXPECT_NEAR(m.internal_energy(1.0, 1.0), 4.0, 1e-14);
  EXPECT_GT(m.de_dtheta(1.0, 1.0), 0.0);
}

TEST(ThermoEnergy, DegenerateLowerBound) {
  const auto m = default_model();
  EXPECT_GE(8.0 * m.internal_energy(8.0, 1.0), 48.0);
}

TEST(ThermoEntropy, ReferencePoint) {
  const auto m = default_model();
  EXPECT_NEAR(m.entropy(1.0, 1.0), 4.0 / 3.0, 1e-14);
}

TEST(ThermoEntropy, DecreasingInDensity) {
  for (const auto& closure : {PressureClosure::power_sum(), PressureClosure::saturating()}) {
    const ThermoModel m(ThermoCoefficients{}, closure);
    for (double theta : {0.2, 1.0, 5.0}) {
      double prev = m.entropy(0.05, theta);
      for (double rho = 0.1; rho < 20.0; rho *= 1.3) {
        const double s = m.entropy(rho, theta);
        EXPECT_LT(s, prev) << closure.name() << " rho=" << rho << " theta=" << theta;
        prev = s;
      }
    }
  }
}

TEST(ThermoEntropy, GibbsResidualAtQuasiRandomPoints) {
  const auto m = default_model();
  for (int i = 1; i <= 100; ++i) {
    const double rho = 0.1 + 9.9 * halton(i, 2);
    const double theta = 0.1 + 9.9 * halton(i, 3);
    EXPECT_LT(gibbs_residual(m, rho, theta), 1e-6) << rho << " " << theta;
  }
}

TEST(ThermoStress, AntisymmetricGradientGivesZero) {
  const auto m = default_model();
  const Mat3 g{{{0.0, 1.0, -2.0}, {-1.0, 0.0, 0.5}, {2.0, -0.5, 0.0}}};
  const Mat3 s = m.stress_tensor(1.3, g);
  for (const auto& row : s)
    for (double x : row) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(ThermoStress, IdentityGradientIsPureBulk) {
  ThermoCoefficients c;
  c.eta0 = 0.5;
  c.eta1 = 0.25;
  const ThermoModel m(c, PressureClosure::power_sum());
  const Mat3 s = m.stress_tensor(1.0, Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s[j][k], j == k ? 3.0 * 0.75 : 0.0, 1e-14);
}

TEST(ThermoStress, AffineInTemperature) {
  ThermoCoefficients c;
  c.mu0 = 0.7;
  c.mu1 = 1.9;
  c.eta0 = 0.3;
  c.eta1 = 0.4;
  const ThermoModel m(c, PressureClosure::power_sum());
  const Mat3 g{{{0.3, -1.2, 0.4}, {0.8, -0.1, 2.0}, {-0.6, 0.9, 0.5}}};
  const Mat3 s1 = m.stress_tensor(1.0, g);
  const Mat3 s2 = m.stress_tensor(2.0, g);
  const Mat3 sh = m.stress_tensor(0.5, g);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double slope = s2[j][k] - s1[j][k];
      const double s0 = s1[j][k] - slope;
      EXPECT_NEAR(sh[j][k], s0 + 0.5 * slope, 1e-13);
    }
}

TEST(ThermoStress, AxialEntryMatchesOneDimensionalStress) {
  ThermoCoefficients c;
  c.eta0 = 0.2;
  c.eta1 = 0.1;
  const ThermoModel m(c, PressureClosure::power_sum());
  Mat3 g{};
  g[2][2] = 1.7;
  for (double theta : {0.5, 1.0, 2.0}) EXPECT_NEAR(m.stress_tensor(theta, g)[2][2], m.stress_1d(theta, 1.7), 1e-13);
}

TEST(ThermoStress, OneDimensionalViscosity) {
  ThermoCoefficients c;
  c.mu0 = 0.75;
  c.mu1 = 0.75;
  const ThermoModel m(c, PressureClosure::power_sum());
  for (double theta : {0.5, 1.0, 2.0}) EXPECT_NEAR(m.stress_1d(theta, 1.0), 1.0 + theta, 1e-14);
  EXPECT_EQ(m.stress_1d(1.0, 0.0), 0.0);
}

TEST(ThermoHeatFlux, ZeroGradientAndHandValue) {
  const auto m = default_model();
  const Vec3 zero = m.heat_flux(1.0, Vec3{0, 0, 0});
  for (double x : zero) EXPECT_EQ(x, 0.0);
  const Vec3 q = m.heat_flux(1.0, Vec3{1, 0, 0});
  EXPECT_NEAR(q[0], -3.0, 1e-14);
  EXPECT_EQ(q[1], 0.0);
  EXPECT_EQ(q[2], 0.0);
  EXPECT_LE(dot(q, Vec3{1, 0, 0}), 0.0);
  EXPECT_NEAR(m.heat_flux_1d(1.0, 1.0), -3.0, 1e-14);
}

TEST(ThermoGibbs, ResidualOracles) {
  const auto m = default_model();
  EXPECT_LT(gibbs_residual(m, 1.0, 1.0, 1e-5), 1e-6);
  EXPECT_LT(gibbs_residual(m, 2.0, 0.5, 1e-5), 1e-5);
}

TEST(ThermoGibbs, CorruptedEntropyIsDetected) {
  const CorruptedEntropy bad{default_model()};
  EXPECT_GT(gibbs_residual(bad, 1.0, 1.0, 1e-5), 1e-2);
}

TEST(ThermoSelfCheckTest, BothClosuresPass) {
  for (const auto& closure : {PressureClosure::power_sum(), PressureClosure::saturating()}) {
    const ThermoModel m(ThermoCoefficients{}, closure);
    const auto r = run_thermo_self_check(m);
    EXPECT_TRUE(r.passed) << closure.name();
    EXPECT_EQ(r.p_at_zero, 0.0);
    EXPECT_GT(r.min_dP, 0.0);
    EXPECT_LT(r.max_dS, 0.0);
    EXPECT_GT(r.min_dp_drho, 0.0);
    EXPECT_GT(r.min_de_dtheta, 0.0);
  }
}

TEST(ThermoSelfCheckTest, SaturatingDegeneracyBound) {
  const auto cl = PressureClosure::saturating();
  EXPECT_NEAR(cl.degeneracy(0.2), 25.0 / 36.0, 1e-14);
  for (double z = 1e-3; z < 1e3; z *= 1.1) EXPECT_LE(cl.degeneracy(z), cl.degeneracy_bound() + 1e-14);
}

TEST(ThermoInversion, RoundTrip) {
  for (const auto& closure : {PressureClosure::power_sum(), PressureClosure::saturating()}) {
    const ThermoModel m(ThermoCoefficients{}, closure);
    for (double rho : {0.05, 0.7, 3.0, 40.0})
      for (double theta : {0.02, 0.9, 4.0, 30.0}) {
        const double e = m.internal_energy(rho, theta);
        const auto inv = m.invert_energy(rho, e, 1.0);
        const double ulp_e = 64.0 * std::numeric_limits<double>::epsilon() * e;
        EXPECT_NEAR(m.internal_energy(rho, inv.theta), e, ulp_e);
        EXPECT_NEAR(inv.theta, theta, 1e-9 * theta + ulp_e / m.evaluate(rho, theta).de_dtheta)
            << closure.name() << " " << rho << " " << theta;
        EXPECT_NEAR(inv.p, m.pressure(rho, theta), 1e-9 * m.pressure(rho, theta));
      }
  }
}

TEST(ThermoInversion, EnergyBelowRestEnergyThrows) {
  const auto m = default_model();
  EXPECT_THROW(m.temperature_from_energy(2.0, 0.5 * m.rest_energy(2.0)), SolverError);
}

TEST(ThermoModelTest, RejectsBadCoefficients) {
  ThermoCoefficients c;
  c.mu1 = 0.0;
  EXPECT_THROW(ThermoModel(c, PressureClosure::power_sum()), PreconditionError);
  c = {};
  c.eta0 = -1.0;
  EXPECT_THROW(ThermoModel(c, PressureClosure::power_sum()), PreconditionError);
  c = {};
  c.kappa3 = 0.0;
  EXPECT_THROW(ThermoModel(c, PressureClosure::power_sum()), PreconditionError);
  EXPECT_THROW(PressureClosure::from_name("ideal"), PreconditionError);
}

TEST(ThermoModelTest, RejectsNonpositiveState) {
  const auto m = default_model();
  EXPECT_THROW(m.pressure(0.0, 1.0), DomainError);
  EXPECT_THROW(m.internal_energy(1.0, -1.0), DomainError);
  EXPECT_THROW(m.entropy(NAN, 1.0), DomainError);
}

TEST(ThermoModelTest, DerivedViscosities) {
  ThermoCoefficients c;
  c.mu0 = 0.75;
  c.eta0 = 0.5;
  c.mu1 = 1.5;
  c.eta1 = 0.0;
  const ThermoModel m(c, PressureClosure::power_sum());
  EXPECT_NEAR(m.nu0(), 1.5, 1e-15);
  EXPECT_NEAR(m.nu1(), 2.0, 1e-15);
}
