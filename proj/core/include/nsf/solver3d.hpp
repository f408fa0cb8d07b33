#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Transverse perturbation of lifted 1D data. With s1 = (xi1 - a)/(b - a),
/// s2 = (xi2 - c)/(d - c) the default shapes are
///   phi_rho = cos(2 pi m1 s1) sin(pi y),  phi_theta = cos(2 pi m2 s2) sin(pi y),
///   psi1 = sin(2 pi m1 s1) sin(pi y),     psi2 = sin(2 pi m2 s2) sin(pi y),
///   psi3 = cos(2 pi m1 s1) sin(pi y).
/// Every default has zero transverse mean and satisfies u.n = 0.
struct PerturbationSpec {
  using Field = std::function<double(double xi1, double xi2, double y)>;

  double delta = 0.05;
  double alpha = 1.5;  ///< amplitude is delta * eps^alpha
  int mode1 = 1, mode2 = 1;
  Field phi_rho, phi_theta, psi1, psi2, psi3;  ///< empty fields use the defaults

  double amplitude(double epsilon) const;
};

/// rho = rho~(1 + A phi_rho), theta = theta~(1 + A phi_theta),
/// u = (A psi1, A psi2, u~ + A psi3) with A = spec.amplitude(eps). The axial
/// grid must refine the 1D grid by an integer factor; the 1D data are constant
/// over each refined group. Throws PreconditionError if a velocity
/// perturbation has a nonzero normal trace or positivity fails.
State3D lift_initial_data(const State1D& reference, const PerturbationSpec& spec, const Grid3D& grid);

/// Cumulative balance quantities of a 3D run at one instant; integrals are
/// over the domain, time integrals start at the initial state.
struct Balance3D {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;  ///< int (1/2 rho |u|^2 + rho e)
  double entropy = 0.0;  ///< int rho s
  double production = 0.0;  ///< time integral of the semi-discrete entropy rate
  double sigma_integral = 0.0;  ///< time integral of int sigma_h
  double sigma_min = 0.0;  ///< smallest pointwise sigma_h seen so far
};

/// Explicit Heun stepper for the conservative 3D scheme. Walls carry zero
/// mass, energy and tangential momentum flux; the normal momentum flux is the
/// wall pressure minus the normal viscous stress.
class Solver3D {
 public:
  Solver3D(const ThermoModel& model, const State3D& initial);
  ~Solver3D();
  Solver3D(Solver3D&&) noexcept;
  Solver3D& operator=(Solver3D&&) noexcept;

  const State3D& state() const;
  const Balance3D& balance() const;
  /// cfl * min over cells of the advective, viscous and conductive limits.
  double stable_dt(double cfl = 0.4) const;
  /// Throws PreconditionError if dt exceeds stable_dt(1) and SolverError on
  /// temperature inversion failure or loss of positivity; the state is then
  /// left unchanged.
  void advance(double dt);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One checked Heun step.
State3D step3d(const ThermoModel& model, const State3D& state, double dt);

double stable_dt_3d(const ThermoModel& model, const State3D& state, double cfl = 0.4);

/// Pointwise sigma_h = S:grad u / theta + kappa |grad theta|^2 / theta^2.
std::vector<double> entropy_production_3d(const ThermoModel& model, const State3D& state);

struct Trajectory3D {
  std::vector<State3D> snapshots;
  std::vector<Balance3D> balance;
};

struct Integrate3DOptions {
  int outputs = 50;
  double cfl = 0.4;
  std::function<void(const State3D&, double dt)> on_step;  ///< called after every step
};

Trajectory3D integrate3d(const ThermoModel& model, const State3D& initial, double t_final,
                         const Integrate3DOptions& options = {});

/// Total dissipation balance at one snapshot for a reference temperature
/// theta_bar: energy_term = int (1/2 rho |u|^2 + H^theta_bar(rho, theta)),
/// production = theta_bar * entropy production, total = their sum.
struct DissipationLedger {
  double t = 0.0;
  double energy_term = 0.0;
  double production = 0.0;
  double total = 0.0;
  double initial_total = 0.0;
};

std::vector<DissipationLedger> dissipation_ledger(const Trajectory3D& trajectory, double theta_bar);

/// max_t |total - initial_total| / max(1, |initial_total|).
double ledger_imbalance(const std::vector<DissipationLedger>& ledger);

}  // namespace nsf
