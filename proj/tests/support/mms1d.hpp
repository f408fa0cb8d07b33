#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "nsf/solver1d.hpp"
#include "nsf/thermo.hpp"

namespace nsf::testing {

/// Manufactured solution on (0,1) compatible with the wall conditions:
///   rho = 1 + A cos(pi y) cos(t), u = A sin(pi y) cos(t), theta = 1 + A cos(pi y) cos(t).
struct Manufactured1D {
  double amp = 0.1;

  double rho(double y, double t) const { return 1.0 + amp * std::cos(std::numbers::pi * y) * std::cos(t); }
  double u(double y, double t) const { return amp * std::sin(std::numbers::pi * y) * std::cos(t); }
  double theta(double y, double t) const { return 1.0 + amp * std::cos(std::numbers::pi * y) * std::cos(t); }
  double u_y(double y, double t) const {
    return amp * std::numbers::pi * std::cos(std::numbers::pi * y) * std::cos(t);
  }
  double theta_y(double y, double t) const {
    return -amp * std::numbers::pi * std::sin(std::numbers::pi * y) * std::cos(t);
  }

  /// Conserved densities (rho, rho u, rho E).
  std::array<double, 3> conserved(const ThermoModel& m, double y, double t) const {
    const double r = rho(y, t), v = u(y, t), th = theta(y, t);
    return {r, r * v, r * (0.5 * v * v + m.internal_energy(r, th))};
  }

  /// Fluxes of mass, momentum and total energy.
  std::array<double, 3> flux(const ThermoModel& m, double y, double t) const {
    const double r = rho(y, t), v = u(y, t), th = theta(y, t);
    const double p = m.pressure(r, th);
    const double s = m.stress_1d(th, u_y(y, t));
    const double q = m.heat_flux_1d(th, theta_y(y, t));
    const double E = r * (0.5 * v * v + m.internal_energy(r, th));
    return {r * v, r * v * v + p - s, (E + p) * v - s * v + q};
  }

  /// Source making the exact fields a solution: d_t U + d_y F, by central
  /// differences of the closed-form U and F.
  Source1D source(const ThermoModel& m) const {
    return [m, self = *this](double y, double t) {
      constexpr double dt = 1e-5, dy = 1e-5;
      const auto up = self.conserved(m, y, t + dt), um = self.conserved(m, y, t - dt);
      const auto fp = self.flux(m, y + dy, t), fm = self.flux(m, y - dy, t);
      std::array<double, 3> s{};
      for (int c = 0; c < 3; ++c) s[c] = (up[c] - um[c]) / (2 * dt) + (fp[c] - fm[c]) / (2 * dy);
      return s;
    };
  }

  State1D initial(int n) const {
    return init_smooth(ProfileSpec{[this](double y) { return rho(y, 0.0); }, [this](double y) { return u(y, 0.0); },
                                   [this](double y) { return theta(y, 0.0); }},
                       n);
  }

  /// Discrete L2 error of all three fields against the exact solution at s.t.
  double l2_error(const State1D& s) const {
    double sum = 0.0;
    for (int i = 0; i < s.n; ++i) {
      const double y = s.y(i);
      const double dr = s.rho[i] - rho(y, s.t), du = s.u[i] - u(y, s.t), dth = s.theta[i] - theta(y, s.t);
      sum += (dr * dr + du * du + dth * dth) * s.h;
    }
    return std::sqrt(sum);
  }
};

/// Observed orders log2(e(n) / e(2n)) of the manufactured run over T at the
/// given resolutions.
inline std::vector<double> mms_orders(const ThermoModel& m, const std::vector<int>& cells, double T,
                                      std::vector<double>* errors = nullptr) {
  const Manufactured1D mms;
  IntegrateOptions opts;
  opts.outputs = 1;
  opts.source = mms.source(m);
  std::vector<double> err;
  for (int n : cells) err.push_back(mms.l2_error(integrate(m, mms.initial(n), T, opts).snapshots.back()));
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) orders.push_back(std::log2(err[i] / err[i + 1]));
  if (errors) *errors = err;
  return orders;
}

}  // namespace nsf::testing
