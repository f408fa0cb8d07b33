#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "nsf/errors.hpp"
#include "nsf/tensor.hpp"

namespace nsf {

/// Reference pressure function P(Z), Z = rho / theta^{3/2}, together with the
/// entropy profile S(Z) obtained by integrating S'(Z) = -3/2 ((5/3)P - Z P') / Z^2.
///
/// Two closures are provided:
///   power_sum   P(Z) = c Z + P_inf Z^{5/3}            S(Z) = -c ln Z
///   saturating  P(Z) = Z / (1 + Z) + P_inf Z^{5/3}    S(Z) = -ln Z + ln(1 + Z) + 3 / (2 (1 + Z))
/// Both satisfy P(0) = 0, P' > 0, 0 < ((5/3)P - Z P')/Z < c and P(Z)/Z^{5/3} -> P_inf.
class PressureClosure {
 public:
  enum class Kind { kPowerSum, kSaturating };

  static PressureClosure power_sum(double linear = 1.0, double p_inf = 1.0);
  static PressureClosure saturating(double p_inf = 1.0);
  /// Accepts "power_sum" and "saturating"; throws PreconditionError otherwise.
  static PressureClosure from_name(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  double p_infinity() const noexcept { return p_inf_; }
  double linear_coefficient() const noexcept { return linear_; }

  double P(double z) const noexcept {
    const double z53 = z * cbrt_sq(z);
    if (kind_ == Kind::kPowerSum) return linear_ * z + p_inf_ * z53;
    return z / (1.0 + z) + p_inf_ * z53;
  }

  double dP(double z) const noexcept {
    const double z23 = cbrt_sq(z);
    if (kind_ == Kind::kPowerSum) return linear_ + (5.0 / 3.0) * p_inf_ * z23;
    const double w = 1.0 + z;
    return 1.0 / (w * w) + (5.0 / 3.0) * p_inf_ * z23;
  }

  struct Value {
    double P, dP;
  };
  /// P and P' sharing one cube root.
  Value eval(double z) const noexcept { return eval(z, cbrt_sq(z)); }
  /// P and P' given z23 = Z^{2/3}.
  Value eval(double z, double z23) const noexcept {
    if (kind_ == Kind::kPowerSum) return {linear_ * z + p_inf_ * z * z23, linear_ + (5.0 / 3.0) * p_inf_ * z23};
    const double w = 1.0 + z;
    return {z / w + p_inf_ * z * z23, 1.0 / (w * w) + (5.0 / 3.0) * p_inf_ * z23};
  }

  /// ((5/3) P(Z) - Z P'(Z)) / Z, the quantity bounded in the structural hypothesis.
  double degeneracy(double z) const noexcept {
    if (kind_ == Kind::kPowerSum) return (2.0 / 3.0) * linear_;
    const double w = 1.0 + z;
    return (2.0 / 3.0 + (5.0 / 3.0) * z) / (w * w);
  }

  /// Supremum of degeneracy() over Z > 0.
  double degeneracy_bound() const noexcept;

  /// S(Z) without the additive constant S0.
  double S(double z) const noexcept {
    if (kind_ == Kind::kPowerSum) return -linear_ * std::log(z);
    return -std::log(z) + std::log1p(z) + 1.5 / (1.0 + z);
  }

  double dS(double z) const noexcept { return -1.5 * degeneracy(z) / z; }

 private:
  PressureClosure(Kind kind, double linear, double p_inf) : kind_(kind), linear_(linear), p_inf_(p_inf) {}

  static double cbrt_sq(double z) noexcept {
    const double c = std::cbrt(z);
    return c * c;
  }

  Kind kind_;
  double linear_;
  double p_inf_;
};

/// Pressure, internal energy and their first derivatives at one state.
struct ThermoPoint {
  double p, e, dp_drho, dp_dtheta, de_dtheta;
};

/// Result of inverting the internal energy: temperature and the pressure there.
struct EnergyInversion {
  double theta, p;
};

/// Material constants of the Navier-Stokes-Fourier closure. All quantities are
/// nondimensional.
struct ThermoCoefficients {
  double a = 1.0;  ///< radiation coefficient
  double mu0 = 1.0, mu1 = 1.0;  ///< mu(theta) = mu0 + mu1 theta
  double eta0 = 0.0, eta1 = 0.0;  ///< eta(theta) = eta0 + eta1 theta
  double kappa0 = 1.0, kappa2 = 1.0, kappa3 = 1.0;  ///< kappa(theta) = kappa0 + kappa2 theta^2 + kappa3 theta^3
  double S0 = 0.0;  ///< additive entropy constant
};

/// Constitutive model: pressure, internal energy, entropy, Newtonian stress and
/// Fourier heat flux. Immutable after construction; every member is a pure
/// function and safe to call concurrently.
class ThermoModel {
 public:
  ThermoModel() : ThermoModel(ThermoCoefficients{}, PressureClosure::power_sum()) {}
  /// Throws PreconditionError if a coefficient violates its sign constraint.
  ThermoModel(const ThermoCoefficients& coefficients, const PressureClosure& closure);

  const ThermoCoefficients& coefficients() const noexcept { return c_; }
  const PressureClosure& closure() const noexcept { return closure_; }

  // Thermodynamic functions. All throw DomainError unless rho > 0 and theta > 0.
  double pressure(double rho, double theta) const {
    check_state(rho, theta);
    const double t32 = theta * std::sqrt(theta);
    const double t2 = theta * theta;
    return theta * t32 * closure_.P(rho / t32) + (c_.a / 3.0) * t2 * t2;
  }

  double internal_energy(double rho, double theta) const {
    check_state(rho, theta);
    const double t32 = theta * std::sqrt(theta);
    const double t2 = theta * theta;
    return (1.5 * theta * t32 * closure_.P(rho / t32) + c_.a * t2 * t2) / rho;
  }

  double entropy(double rho, double theta) const {
    check_state(rho, theta);
    const double t32 = theta * std::sqrt(theta);
    return c_.S0 + closure_.S(rho / t32) + (4.0 * c_.a / 3.0) * theta * theta * theta / rho;
  }

  double dp_drho(double rho, double theta) const {
    check_state(rho, theta);
    return theta * closure_.dP(rho / (theta * std::sqrt(theta)));
  }

  double dp_dtheta(double rho, double theta) const {
    check_state(rho, theta);
    const double t32 = theta * std::sqrt(theta);
    const double z = rho / t32;
    return 2.5 * t32 * closure_.P(z) - 1.5 * rho * closure_.dP(z) + (4.0 * c_.a / 3.0) * theta * theta * theta;
  }

  double de_dtheta(double rho, double theta) const {
    check_state(rho, theta);
    const double z = rho / (theta * std::sqrt(theta));
    return 2.25 * closure_.degeneracy(z) + 4.0 * c_.a * theta * theta * theta / rho;
  }

  double de_drho(double rho, double theta) const {
    check_state(rho, theta);
    const double t32 = theta * std::sqrt(theta);
    const double z = rho / t32;
    const double t2 = theta * theta;
    return 1.5 * theta * closure_.dP(z) / rho - (1.5 * theta * t32 * closure_.P(z) + c_.a * t2 * t2) / (rho * rho);
  }

  /// All of the above in one evaluation. Throws DomainError like pressure().
  ThermoPoint evaluate(double rho, double theta) const {
    check_state(rho, theta);
    const double c = std::cbrt(rho);
    return evaluate(rho, theta, c * c);
  }

  /// evaluate() with rho23 = rho^{2/3} supplied by the caller; no argument checks.
  ThermoPoint evaluate(double rho, double theta, double rho23) const noexcept {
    const double t32 = theta * std::sqrt(theta);
    const double z = rho / t32;
    const auto v = closure_.eval(z, rho23 / theta);
    const double t3 = theta * theta * theta;
    const double t4 = t3 * theta;
    return {theta * t32 * v.P + (c_.a / 3.0) * t4, (1.5 * theta * t32 * v.P + c_.a * t4) / rho, theta * v.dP,
            2.5 * t32 * v.P - 1.5 * rho * v.dP + (4.0 * c_.a / 3.0) * t3,
            2.25 * closure_.degeneracy(z) + 4.0 * c_.a * t3 / rho};
  }

  /// sqrt(p_rho + theta p_theta^2 / (rho^2 e_theta)) from a ThermoPoint.
  static double sound_speed(double rho, double theta, const ThermoPoint& tp) {
    return std::sqrt(tp.dp_drho + theta * tp.dp_dtheta * tp.dp_dtheta / (rho * rho * tp.de_dtheta));
  }

  /// Adiabatic sound speed sqrt(p_rho + theta p_theta^2 / (rho^2 e_theta)).
  double sound_speed(double rho, double theta) const;

  /// Lower limit of e(rho, .) as theta -> 0+ (the "rest" energy 3/2 P_inf rho^{2/3}).
  double rest_energy(double rho) const;

  /// Inverts e(rho, .) = e by safeguarded Newton iteration inside a monotone
  /// bracket (e is strictly increasing in theta). `guess` seeds the iteration.
  /// Throws SolverError if e is at or below the rest energy or the iteration
  /// fails; the result is accurate to a relative 1e-12.
  double temperature_from_energy(double rho, double e, double guess = 1.0) const {
    return invert_energy(rho, e, guess).theta;
  }
  /// temperature_from_energy together with the pressure at the recovered state.
  EnergyInversion invert_energy(double rho, double e, double guess = 1.0) const {
    const double c = std::cbrt(rho);
    return invert_energy(rho, e, guess, c * c);
  }
  /// invert_energy() with rho23 = rho^{2/3} supplied by the caller.
  EnergyInversion invert_energy(double rho, double e, double guess, double rho23) const;

  // Transport coefficients.
  double mu(double theta) const noexcept { return c_.mu0 + c_.mu1 * theta; }
  double eta(double theta) const noexcept { return c_.eta0 + c_.eta1 * theta; }
  double kappa(double theta) const noexcept {
    const double t2 = theta * theta;
    return c_.kappa0 + t2 * (c_.kappa2 + c_.kappa3 * theta);
  }
  double nu0() const noexcept { return (4.0 / 3.0) * c_.mu0 + c_.eta0; }
  double nu1() const noexcept { return (4.0 / 3.0) * c_.mu1 + c_.eta1; }
  /// One-dimensional viscosity nu0 + nu1 theta.
  double nu(double theta) const noexcept { return nu0() + nu1() * theta; }

  /// Newtonian stress mu(theta)(G + G^T - 2/3 div u I) + eta(theta) div u I.
  /// Throws DomainError on theta <= 0 or nonfinite gradient entries.
  Mat3 stress_tensor(double theta, const Mat3& grad_u) const;
  /// Fourier heat flux -kappa(theta) grad theta.
  Vec3 heat_flux(double theta, const Vec3& grad_theta) const;
  double stress_1d(double theta, double du_dy) const;
  double heat_flux_1d(double theta, double dtheta_dy) const;

  /// The constant c in rho e >= c (rho^{5/3} + theta^4), min(3/2 P_inf, a).
  double energy_lower_bound_constant() const noexcept { return std::min(1.5 * closure_.p_infinity(), c_.a); }

  /// Ballistic free energy H^Theta(rho, theta) = rho e - Theta rho s.
  double ballistic_free_energy(double rho, double theta, double Theta) const;
  /// Closed-form d/drho H^Theta(rho, theta) at fixed theta.
  double ballistic_free_energy_drho(double rho, double theta, double Theta) const;

 private:
  static void check_state(double rho, double theta) {
    if (!(rho > 0.0) || !(theta > 0.0) || !std::isfinite(rho) || !std::isfinite(theta)) throw_domain(rho, theta);
  }
  [[noreturn]] static void throw_domain(double rho, double theta);

  ThermoCoefficients c_;
  PressureClosure closure_;
};

/// Residual of the Gibbs relation theta Ds = De + p D(1/rho) evaluated with
/// central differences of step `step` (relative to the coordinate) in the
/// rho and theta directions. Returns the larger of the two directional
/// residuals, each normalised by max(1, |De| + |p D(1/rho)|) so that values are
/// comparable across magnitudes of the state. Works with any type exposing
/// pressure/internal_energy/entropy(rho, theta).
template <class Model>
double gibbs_residual(const Model& model, double rho, double theta, double step = 1e-5) {
  if (!(rho > 0.0) || !(theta > 0.0)) throw DomainError("gibbs_residual: rho and theta must be positive");
  if (!(step > 0.0) || step >= 0.5) throw PreconditionError("gibbs_residual: step must lie in (0, 0.5)");
  const double p = model.pressure(rho, theta);

  const double hr = step * rho;
  const double ds_r = (model.entropy(rho + hr, theta) - model.entropy(rho - hr, theta)) / (2.0 * hr);
  const double de_r = (model.internal_energy(rho + hr, theta) - model.internal_energy(rho - hr, theta)) / (2.0 * hr);
  const double dv_r = -1.0 / (rho * rho);
  const double res_r = std::abs(theta * ds_r - de_r - p * dv_r) / std::max(1.0, std::abs(de_r) + std::abs(p * dv_r));

  const double ht = step * theta;
  const double ds_t = (model.entropy(rho, theta + ht) - model.entropy(rho, theta - ht)) / (2.0 * ht);
  const double de_t = (model.internal_energy(rho, theta + ht) - model.internal_energy(rho, theta - ht)) / (2.0 * ht);
  const double res_t = std::abs(theta * ds_t - de_t) / std::max(1.0, std::abs(de_t));

  return std::max(res_r, res_t);
}

/// Outcome of sampling the structural hypotheses of a closure.
struct ThermoSelfCheck {
  double max_gibbs_residual = 0.0;
  double min_dp_drho = 0.0;
  double min_de_dtheta = 0.0;
  double min_degeneracy = 0.0;  ///< min of ((5/3)P - Z P')/Z over sampled Z
  double max_degeneracy = 0.0;  ///< recorded bound c
  bool p_over_z53_decreasing = false;
  double p_over_z53_at_max = 0.0;  ///< P(Z)/Z^{5/3} at the largest sampled Z
  double max_dS = 0.0;  ///< largest S'(Z) sampled; must be < 0
  double p_at_zero = 0.0;
  double min_dP = 0.0;
  bool passed = false;
};

/// Samples Gibbs residuals at `points` Halton points in [lo, hi]^2 and the
/// closure hypotheses on a logarithmic Z grid in (0, 1e3].
ThermoSelfCheck run_thermo_self_check(const ThermoModel& model, int points = 100, double lo = 0.1, double hi = 10.0);

}  // namespace nsf
