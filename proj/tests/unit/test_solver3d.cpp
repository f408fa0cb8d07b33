#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "nsf/errors.hpp"
#include "nsf/relent.hpp"
#include "nsf/solver1d.hpp"
#include "nsf/solver3d.hpp"

using namespace nsf;

namespace {

State1D reference(int n) {
  return init_smooth(make_profile({1.0, 0.2, 1, false}, {0.0, 0.2, 1, true}, {1.0, 0.2, 1, false}), n);
}

State3D uniform_rest(const Grid3D& g) {
  State3D s(g);
  std::fill(s.rho.begin(), s.rho.end(), 1.3);
  std::fill(s.theta.begin(), s.theta.end(), 0.9);
  return s;
}

}  // namespace

TEST(BuildDomain, SpacingsAndMeasure) {
  const Grid3D g1 = build_domain(CrossSection{}, 1.0, GridPolicy{16, 16, 64});
  EXPECT_DOUBLE_EQ(g1.h1, 1.0 / 16);
  EXPECT_DOUBLE_EQ(g1.h2, 1.0 / 16);
  EXPECT_DOUBLE_EQ(g1.h3, 1.0 / 64);
  const Grid3D g2 = build_domain(CrossSection{}, 0.5, GridPolicy{16, 16, 64});
  EXPECT_DOUBLE_EQ(g2.h1, 1.0 / 32);
  EXPECT_DOUBLE_EQ(g2.h2, 1.0 / 32);
  EXPECT_DOUBLE_EQ(build_domain(CrossSection{}, 0.25, GridPolicy{}).cross_section_measure(), 1.0 / 16);
}

TEST(BuildDomain, RejectsInvalidInput) {
  EXPECT_THROW(build_domain(CrossSection{}, 0.0, GridPolicy{}), PreconditionError);
  EXPECT_THROW(build_domain(CrossSection{1, 0, 0, 1}, 1.0, GridPolicy{}), PreconditionError);
  EXPECT_THROW(build_domain(CrossSection{}, 1.0, GridPolicy{1, 4, 8}), PreconditionError);
}

TEST(LiftInitialData, ZeroAmplitudeIsExactLift) {
  const ThermoModel m;
  const State1D ref = reference(16);
  PerturbationSpec spec;
  spec.delta = 0.0;
  const State3D s = lift_initial_data(ref, spec, build_domain(CrossSection{}, 0.5, GridPolicy{4, 4, 32}));
  const std::vector<double> r{1.0};
  const auto n = scaled_norms(m, s, ref, r);
  EXPECT_EQ(n.rho_norm + n.theta_norm + n.rel_entropy + n.u_norm[0], 0.0);
}

TEST(LiftInitialData, TransverseMeanMatchesReference) {
  const State1D ref = reference(16);
  PerturbationSpec spec;
  spec.delta = 0.05;
  spec.alpha = 0.0;
  const Grid3D g = build_domain(CrossSection{}, 0.5, GridPolicy{8, 8, 16});
  const State3D s = lift_initial_data(ref, spec, g);
  const auto rho = cross_section_average(g, s.rho);
  const auto theta = cross_section_average(g, s.theta);
  const auto u3 = cross_section_average(g, s.u3);
  for (int k = 0; k < g.n3; ++k) {
    EXPECT_NEAR(rho[k], ref.rho[k], 1e-10);
    EXPECT_NEAR(theta[k], ref.theta[k], 1e-10);
    EXPECT_NEAR(u3[k], ref.u[k], 1e-10);
  }
}

TEST(LiftInitialData, AmplitudeScalesWithEpsilon) {
  PerturbationSpec spec;
  spec.delta = 0.05;
  spec.alpha = 1.5;
  EXPECT_NEAR(spec.amplitude(0.25), 0.05 * 0.125, 1e-16);
}

TEST(LiftInitialData, RejectsNonzeroNormalTrace) {
  PerturbationSpec spec;
  spec.psi1 = [](double, double, double y) { return std::sin(std::numbers::pi * y); };
  EXPECT_THROW(lift_initial_data(reference(16), spec, build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 16})),
               PreconditionError);
}

TEST(Step3D, UniformRestStateIsStationary) {
  const ThermoModel m;
  State3D s = uniform_rest(build_domain(CrossSection{}, 0.5, GridPolicy{4, 5, 8}));
  for (int k = 0; k < 10; ++k) s = step3d(m, s, stable_dt_3d(m, s));
  for (std::size_t c = 0; c < s.rho.size(); ++c) {
    EXPECT_NEAR(s.rho[c], 1.3, 1e-14);
    EXPECT_NEAR(s.theta[c], 0.9, 1e-14);
    EXPECT_NEAR(std::abs(s.u1[c]) + std::abs(s.u2[c]) + std::abs(s.u3[c]), 0.0, 1e-14);
  }
}

TEST(Step3D, MassConservedOverFiveHundredSteps) {
  const ThermoModel m;
  const Grid3D g = build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 16});
  Solver3D solver(m, lift_initial_data(reference(16), PerturbationSpec{}, g));
  const double m0 = solver.balance().mass;
  for (int k = 0; k < 500; ++k) solver.advance(solver.stable_dt());
  EXPECT_LT(std::abs(solver.balance().mass - m0) / m0, 1e-12);
}

TEST(Step3D, RejectsUnstableStep) {
  const ThermoModel m;
  const Grid3D g = build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 16});
  Solver3D solver(m, lift_initial_data(reference(16), PerturbationSpec{}, g));
  const State3D before = solver.state();
  EXPECT_THROW(solver.advance(2.0 * solver.stable_dt(1.0)), PreconditionError);
  EXPECT_EQ(solver.state().rho, before.rho);
}

TEST(Step3D, ExactLiftTracksOneDimensionalRun) {
  const ThermoModel m;
  State1D ref = reference(16);
  PerturbationSpec spec;
  spec.delta = 0.0;
  const Grid3D g = build_domain(CrossSection{}, 0.5, GridPolicy{4, 4, 16});
  Integrate3DOptions o;
  o.outputs = 2;
  o.on_step = [&](const State3D&, double dt) { ref = step(m, ref, dt); };
  const auto tr = integrate3d(m, lift_initial_data(ref, spec, g), 0.02, o);
  const std::vector<double> r{1.0, 1.5};
  const auto n = scaled_norms(m, tr.snapshots.back(), ref, r);
  EXPECT_LT(n.rho_norm, 1e-20);
  EXPECT_LT(n.theta_norm, 1e-20);
  EXPECT_LT(n.u_norm[0], 1e-12);
}

TEST(EntropyProduction3D, NonnegativeOnPerturbedState) {
  const ThermoModel m;
  const Grid3D g = build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 16});
  for (double v : entropy_production_3d(m, lift_initial_data(reference(16), PerturbationSpec{}, g))) EXPECT_GE(v, 0.0);
}

TEST(DissipationLedgerTest, UniformRestIsConstant) {
  const ThermoModel m;
  Integrate3DOptions o;
  o.outputs = 3;
  const auto tr = integrate3d(m, uniform_rest(build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 8})), 0.01, o);
  const auto ledger = dissipation_ledger(tr, 1.0);
  for (const auto& l : ledger) {
    EXPECT_NEAR(l.production, 0.0, 1e-15);
    EXPECT_NEAR(l.total, l.initial_total, 1e-13);
  }
}

TEST(DissipationLedgerTest, PerturbedRunBalances) {
  const ThermoModel m;
  const Grid3D g = build_domain(CrossSection{}, 1.0, GridPolicy{8, 8, 32});
  Integrate3DOptions o;
  o.outputs = 10;
  const auto tr = integrate3d(m, lift_initial_data(reference(32), PerturbationSpec{}, g), 0.05, o);
  const auto ledger = dissipation_ledger(tr, 1.0);
  EXPECT_LT(ledger_imbalance(ledger), 1e-8);
  for (std::size_t k = 1; k < ledger.size(); ++k)
    EXPECT_LE(ledger[k].energy_term, ledger[k - 1].energy_term + 1e-8);
  EXPECT_GT(tr.balance.back().sigma_min, -1e-12);
}

TEST(DissipationLedgerTest, AffineInReferenceTemperature) {
  const ThermoModel m;
  const Grid3D g = build_domain(CrossSection{}, 1.0, GridPolicy{4, 4, 16});
  Integrate3DOptions o;
  o.outputs = 2;
  const auto tr = integrate3d(m, lift_initial_data(reference(16), PerturbationSpec{}, g), 0.01, o);
  const auto l1 = dissipation_ledger(tr, 1.0);
  const auto l2 = dissipation_ledger(tr, 2.0);
  for (std::size_t k = 0; k < l1.size(); ++k) {
    const auto& b = tr.balance[k];
    EXPECT_NEAR(l2[k].energy_term - l1[k].energy_term, -b.entropy, 1e-12);
    EXPECT_NEAR(l2[k].production, 2.0 * l1[k].production, 1e-15);
  }
  EXPECT_THROW(dissipation_ledger(tr, 0.0), PreconditionError);
}
