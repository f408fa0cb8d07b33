#include "nsf/thermo.hpp"

#include <limits>
#include <sstream>
#include <vector>

#include "nsf/sampling.hpp"

namespace nsf {

PressureClosure PressureClosure::power_sum(double linear, double p_inf) {
  if (!(linear > 0.0) || !(p_inf > 0.0))
    throw PreconditionError("power_sum closure needs positive linear coefficient and P_inf");
  return PressureClosure(Kind::kPowerSum, linear, p_inf);
}

PressureClosure PressureClosure::saturating(double p_inf) {
  if (!(p_inf > 0.0)) throw PreconditionError("saturating closure needs positive P_inf");
  return PressureClosure(Kind::kSaturating, 1.0, p_inf);
}

PressureClosure PressureClosure::from_name(std::string_view name) {
  if (name == "power_sum") return power_sum();
  if (name == "saturating") return saturating();
  throw PreconditionError("unknown pressure closure '" + std::string(name) + "' (expected power_sum or saturating)");
}

std::string PressureClosure::name() const { return kind_ == Kind::kPowerSum ? "power_sum" : "saturating"; }

double PressureClosure::degeneracy_bound() const noexcept {
  if (kind_ == Kind::kPowerSum) return (2.0 / 3.0) * linear_;
  // max of (2/3 + 5Z/3)/(1+Z)^2 is attained at Z = 1/5
  return 25.0 / 36.0;
}

ThermoModel::ThermoModel(const ThermoCoefficients& c, const PressureClosure& closure) : c_(c), closure_(closure) {
  std::ostringstream bad;
  if (!(c.a > 0.0)) bad << " a>0";
  if (!(c.mu0 > 0.0)) bad << " mu0>0";
  if (!(c.mu1 > 0.0)) bad << " mu1>0";
  if (!(c.eta0 >= 0.0)) bad << " eta0>=0";
  if (!(c.eta1 >= 0.0)) bad << " eta1>=0";
  if (!(c.kappa0 > 0.0)) bad << " kappa0>0";
  if (!(c.kappa2 > 0.0)) bad << " kappa2>0";
  if (!(c.kappa3 > 0.0)) bad << " kappa3>0";
  if (!std::isfinite(c.S0)) bad << " S0 finite";
  if (!bad.str().empty()) throw PreconditionError("thermo coefficients violate:" + bad.str());
}

void ThermoModel::throw_domain(double rho, double theta) {
  std::ostringstream os;
  os << "thermodynamic state outside domain: rho=" << rho << " theta=" << theta;
  throw DomainError(os.str());
}

double ThermoModel::sound_speed(double rho, double theta) const {
  const double pt = dp_dtheta(rho, theta);
  return std::sqrt(dp_drho(rho, theta) + theta * pt * pt / (rho * rho * de_dtheta(rho, theta)));
}

double ThermoModel::rest_energy(double rho) const {
  if (!(rho > 0.0)) throw DomainError("rest_energy: rho must be positive");
  const double c = std::cbrt(rho);
  return 1.5 * closure_.p_infinity() * c * c;
}

EnergyInversion ThermoModel::invert_energy(double rho, double e, double guess, double rho23) const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw SolverError("temperature inversion: nonpositive density");
  if (!std::isfinite(e)) throw SolverError("temperature inversion: nonfinite internal energy");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = kInf;
  double theta = (guess > 0.0 && std::isfinite(guess)) ? guess : 1.0;
  for (int it = 0; it < 200; ++it) {
    const ThermoPoint tp = evaluate(rho, theta, rho23);
    const double f = tp.e - e;
    if (f > 0.0) {
      hi = theta;
    } else if (f < 0.0) {
      lo = theta;
    } else {
      return {theta, tp.p};
    }
    double next = theta - f / tp.de_dtheta;
    const bool newton = next > lo && next < hi && std::isfinite(next);
    if (!newton) next = (hi == kInf) ? 2.0 * theta : 0.5 * (lo + hi);
    const double change = next - theta;
    if (newton && std::abs(change) <= 1e-7 * next) return {next, tp.p + tp.dp_dtheta * change};
    if (std::abs(change) <= 1e-13 * next) return {next, evaluate(rho, next, rho23).p};
    if (!(next > 0.0)) break;
    theta = next;
  }
  if (e <= 1.5 * closure_.p_infinity() * rho23) throw SolverError("temperature inversion: internal energy at or below the rest energy");
  throw SolverError("temperature inversion did not converge");
}

Mat3 ThermoModel::stress_tensor(double theta, const Mat3& g) const {
  if (!(theta > 0.0)) throw DomainError("stress_tensor: theta must be positive");
  if (!all_finite(g)) throw DomainError("stress_tensor: nonfinite velocity gradient");
  const double m = mu(theta);
  const double div = trace(g);
  const double diag = (eta(theta) - (2.0 / 3.0) * m) * div;
  Mat3 s{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) s[j][k] = m * (g[j][k] + g[k][j]);
    s[j][j] += diag;
  }
  return s;
}

Vec3 ThermoModel::heat_flux(double theta, const Vec3& grad_theta) const {
  if (!(theta > 0.0)) throw DomainError("heat_flux: theta must be positive");
  if (!all_finite(grad_theta)) throw DomainError("heat_flux: nonfinite temperature gradient");
  const double k = kappa(theta);
  return {-k * grad_theta[0], -k * grad_theta[1], -k * grad_theta[2]};
}

double ThermoModel::stress_1d(double theta, double du_dy) const {
  if (!(theta > 0.0)) throw DomainError("stress_1d: theta must be positive");
  return nu(theta) * du_dy;
}

double ThermoModel::heat_flux_1d(double theta, double dtheta_dy) const {
  if (!(theta > 0.0)) throw DomainError("heat_flux_1d: theta must be positive");
  return -kappa(theta) * dtheta_dy;
}

double ThermoModel::ballistic_free_energy(double rho, double theta, double Theta) const {
  if (!(Theta > 0.0)) throw DomainError("ballistic_free_energy: Theta must be positive");
  return rho * internal_energy(rho, theta) - Theta * rho * entropy(rho, theta);
}

double ThermoModel::ballistic_free_energy_drho(double rho, double theta, double Theta) const {
  check_state(rho, theta);
  if (!(Theta > 0.0)) throw DomainError("ballistic_free_energy_drho: Theta must be positive");
  // d(rho e)/drho = 3/2 theta P'(Z);  d(rho s)/drho = S0 + S(Z) + Z S'(Z)
  const double z = rho / (theta * std::sqrt(theta));
  const double drho_rho_e = 1.5 * theta * closure_.dP(z);
  const double drho_rho_s = c_.S0 + closure_.S(z) - 1.5 * closure_.degeneracy(z);
  return drho_rho_e - Theta * drho_rho_s;
}

ThermoSelfCheck run_thermo_self_check(const ThermoModel& model, int points, double lo, double hi) {
  if (points <= 0 || !(lo > 0.0) || !(hi > lo)) throw PreconditionError("run_thermo_self_check: bad sampling box");
  ThermoSelfCheck r;
  r.min_dp_drho = std::numeric_limits<double>::infinity();
  r.min_de_dtheta = r.min_dp_drho;
  for (int i = 1; i <= points; ++i) {
    const double rho = lo + (hi - lo) * halton(static_cast<std::uint64_t>(i), 2);
    const double theta = lo + (hi - lo) * halton(static_cast<std::uint64_t>(i), 3);
    r.max_gibbs_residual = std::max(r.max_gibbs_residual, gibbs_residual(model, rho, theta, 1e-5));
    r.min_dp_drho = std::min(r.min_dp_drho, model.dp_drho(rho, theta));
    r.min_de_dtheta = std::min(r.min_de_dtheta, model.de_dtheta(rho, theta));
  }

  const auto& cl = model.closure();
  r.p_at_zero = cl.P(0.0);
  r.min_degeneracy = std::numeric_limits<double>::infinity();
  r.min_dP = std::numeric_limits<double>::infinity();
  r.max_dS = -std::numeric_limits<double>::infinity();
  r.p_over_z53_decreasing = true;
  double prev_ratio = std::numeric_limits<double>::infinity();
  constexpr int kZSamples = 400;
  for (int i = 0; i <= kZSamples; ++i) {
    // log-spaced Z in [1e-6, 1e3]
    const double z = std::pow(10.0, -6.0 + 9.0 * i / kZSamples);
    const double deg = cl.degeneracy(z);
    r.min_degeneracy = std::min(r.min_degeneracy, deg);
    r.max_degeneracy = std::max(r.max_degeneracy, deg);
    r.min_dP = std::min(r.min_dP, cl.dP(z));
    r.max_dS = std::max(r.max_dS, cl.dS(z));
    const double ratio = cl.P(z) / std::pow(z, 5.0 / 3.0);
    if (ratio > prev_ratio) r.p_over_z53_decreasing = false;
    prev_ratio = ratio;
    r.p_over_z53_at_max = ratio;
  }
  r.min_dP = std::min(r.min_dP, cl.dP(0.0));

  r.passed = r.max_gibbs_residual < 1e-6 && r.min_dp_drho > 0.0 && r.min_de_dtheta > 0.0 && r.min_degeneracy > 0.0 &&
             r.max_degeneracy <= cl.degeneracy_bound() * (1.0 + 1e-12) && r.p_over_z53_decreasing &&
             r.p_over_z53_at_max >= cl.p_infinity() &&
             r.p_over_z53_at_max - cl.p_infinity() <= 0.02 * cl.p_infinity() && r.max_dS < 0.0 && r.p_at_zero == 0.0 && r.min_dP > 0.0;
  return r;
}

}  // namespace nsf
