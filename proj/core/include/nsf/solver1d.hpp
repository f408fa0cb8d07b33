#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Initial profiles of the 1D problem as functions of y in [0, 1].
struct ProfileSpec {
  std::function<double(double)> rho, u, theta;
};

/// f(y) = base + amp sin(pi mode y), or cos when `sine` is false.
struct ModeTerm {
  double base = 0.0;
  double amp = 0.0;
  int mode = 1;
  bool sine = true;

  double operator()(double y) const;
};

ProfileSpec make_profile(const ModeTerm& rho, const ModeTerm& u, const ModeTerm& theta);

/// Samples `spec` at n cell centres. Throws PreconditionError if rho or theta
/// is not positive on [0, 1] or u does not vanish at y = 0 and y = 1.
State1D init_smooth(const ProfileSpec& spec, int n);

/// Volume source (mass, momentum, energy) evaluated at (y, t).
using Source1D = std::function<std::array<double, 3>(double y, double t)>;

/// cfl * min(h / (|u| + c_s), h^2 rho_min / (2 nu_max), h^2 rho_min c_v,min / (2 kappa_max)).
double stable_dt_1d(const ThermoModel& model, const State1D& state, double cfl = 0.4);

/// One Heun step of the conservative finite-volume scheme. Throws
/// PreconditionError if dt exceeds stable_dt_1d(cfl = 1) and SolverError if
/// the temperature cannot be recovered or positivity is lost.
State1D step(const ThermoModel& model, const State1D& state, double dt, const Source1D& source = {});

/// Pointwise entropy production (1/theta)(nu u_y^2 + kappa theta_y^2 / theta).
std::vector<double> entropy_production(const ThermoModel& model, const State1D& state);

struct BalanceDiagnostics1D {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double entropy_production_min = 0.0;
};

BalanceDiagnostics1D diagnostics(const ThermoModel& model, const State1D& state);

struct Trajectory1D {
  std::vector<State1D> snapshots;
  std::vector<BalanceDiagnostics1D> diagnostics;
};

struct IntegrateOptions {
  int outputs = 50;  ///< snapshots after the initial one, evenly spaced in time
  double cfl = 0.4;
  Source1D source;
};

/// Integrates to t_final storing outputs + 1 snapshots. Throws SolverError with
/// the failure time if a step fails.
Trajectory1D integrate(const ThermoModel& model, const State1D& initial, double t_final,
                       const IntegrateOptions& options = {});

/// Residual of the entropy equation evaluated on stored snapshots, with time
/// derivatives from neighbouring snapshots: the L1 norm over (0,1) at each
/// interior snapshot, maximised over time. Needs at least three snapshots and
/// four cells.
double entropy_balance_residual(const ThermoModel& model, std::span<const State1D> snapshots);

}  // namespace nsf
