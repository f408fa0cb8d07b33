#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Box [rho_lo, rho_hi] x [theta_lo, theta_hi] separating essential from
/// residual states.
struct EssentialWindow {
  double rho_lo = 0.5, rho_hi = 2.0, theta_lo = 0.5, theta_hi = 2.0;

  bool contains(double rho, double theta) const noexcept {
    return rho >= rho_lo && rho <= rho_hi && theta >= theta_lo && theta <= theta_hi;
  }
  /// Throws PreconditionError unless 0 < lo <= hi for both variables.
  void validate() const;

  /// Window with rho_lo = min/2, rho_hi = 2 max over every sample of the
  /// reference trajectory, and likewise for theta.
  static EssentialWindow from_reference(std::span<const State1D> trajectory);
};

double ballistic_free_energy(const ThermoModel& model, double rho, double theta, double Theta);

/// Relative entropy E(rho, theta | r, Theta)
///   = H^Theta(rho, theta) - d_rho H^Theta(r, Theta)(rho - r) - H^Theta(r, Theta).
double rel_entropy(const ThermoModel& model, double rho, double theta, double r, double Theta);

/// Constants calibrated by coercivity_check. A constant stays +infinity when
/// no sample constrained it.
struct CoercivityReport {
  double c_essential;  ///< E >= c (|rho - r|^2 + |theta - Theta|^2) inside the window
  double c_residual;  ///< E >= c (1 + |rho s| + rho e) outside the window
  double c_below;  ///< E >= c |rho - r| for rho < rho_lo
  double c_above;  ///< E >= c rho for rho > rho_hi
  double min_rel_entropy;  ///< smallest E over samples away from the reference point
  std::size_t inside = 0, outside = 0, below = 0, above = 0;

  bool all_positive() const noexcept {
    return c_essential > 0.0 && c_residual > 0.0 && c_below > 0.0 && c_above > 0.0 && min_rel_entropy > 0.0;
  }
};

struct StatePoint {
  double rho;
  double theta;
};

/// Calibrates the coercivity constants over explicit sample and reference
/// sets. Samples coinciding with the reference point are skipped. Throws
/// PreconditionError on an empty sample or reference set.
CoercivityReport coercivity_check(const ThermoModel& model, const EssentialWindow& window,
                                  std::span<const StatePoint> samples, std::span<const StatePoint> references);

/// Halton-sampled variant: half of `samples` fill the window, the rest are
/// log-uniform over [lo/20, 4 hi] in both variables; `references` reference
/// points come from the central half of the window.
CoercivityReport coercivity_check(const ThermoModel& model, const EssentialWindow& window,
                                  std::size_t samples = 10000, std::size_t references = 8);

struct SplitField {
  std::vector<double> essential, residual;
};

/// h = h_ess + h_res with h_ess = h where (rho, theta) lies in the window.
SplitField essential_residual_split(std::span<const double> h, std::span<const double> rho,
                                    std::span<const double> theta, const EssentialWindow& window);

/// Cross-section average (f)_{Q_eps}(y_k) for each axial cell k.
std::vector<double> cross_section_average(const Grid3D& grid, std::span<const double> field);

/// Instantaneous scaled distances between a 3D state and the lifted 1D
/// reference (rho~, (0,0,u~), theta~), midpoint quadrature, normalised by |Q_eps|.
/// Cellwise relative entropies below zero (roundoff) count as zero.
struct ScaledNormSample {
  double time = 0.0;
  double rho_norm = 0.0;  ///< |Q|^-1 ||rho - rho~||_{5/3}^{5/3}
  double theta_norm = 0.0;  ///< |Q|^-1 ||theta - theta~||_2^2
  double rel_entropy = 0.0;  ///< |Q|^-1 int (1/2 rho |u - u~|^2 + E(rho, theta | rho~, theta~))
  std::vector<double> r;  ///< velocity exponents
  std::vector<double> u_norm;  ///< |Q|^-1 ||u - u~||_r^r at this instant, per exponent
};

/// Throws PreconditionError unless every r lies in [1, 2) and the axial grid of
/// `state` refines that of `reference` by an integer factor.
ScaledNormSample scaled_norms(const ThermoModel& model, const State3D& state, const State1D& reference,
                              std::span<const double> r_exponents);

/// Time aggregation of ScaledNormSample values: sup over time for density,
/// temperature and relative entropy, trapezoidal time integral for the
/// velocity norms.
struct ScaledNormReport {
  double sup_t_density_norm = 0.0;
  double sup_t_temperature_norm = 0.0;
  double sup_t_rel_entropy = 0.0;
  std::vector<double> r;
  std::vector<double> velocity_norm_r;  ///< |Q|^-1 ||u - u~||^r_{L^r((0,t) x Omega)}
  std::vector<std::pair<double, double>> rel_entropy_trace;  ///< (t, E_scaled)

  /// Samples must arrive in nondecreasing time order with identical r lists.
  void add(const ScaledNormSample& sample);

 private:
  bool started_ = false;
  double last_time_ = 0.0;
  std::vector<double> last_u_;
};

}  // namespace nsf
