#include "nsf/relent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsf/sampling.hpp"

namespace nsf {

void EssentialWindow::validate() const {
  if (!(rho_lo > 0.0) || !(rho_hi >= rho_lo) || !(theta_lo > 0.0) || !(theta_hi >= theta_lo))
    throw PreconditionError("EssentialWindow: need 0 < lo <= hi for rho and theta");
}

EssentialWindow EssentialWindow::from_reference(std::span<const State1D> trajectory) {
  if (trajectory.empty()) throw PreconditionError("EssentialWindow::from_reference: empty trajectory");
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  double tmin = rmin, tmax = 0.0;
  for (const auto& s : trajectory) {
    for (double v : s.rho) rmin = std::min(rmin, v), rmax = std::max(rmax, v);
    for (double v : s.theta) tmin = std::min(tmin, v), tmax = std::max(tmax, v);
  }
  EssentialWindow w{0.5 * rmin, 2.0 * rmax, 0.5 * tmin, 2.0 * tmax};
  w.validate();
  return w;
}

double ballistic_free_energy(const ThermoModel& model, double rho, double theta, double Theta) {
  return model.ballistic_free_energy(rho, theta, Theta);
}

double rel_entropy(const ThermoModel& model, double rho, double theta, double r, double Theta) {
  const double slope = model.ballistic_free_energy_drho(r, Theta, Theta);
  return model.ballistic_free_energy(rho, theta, Theta) - slope * (rho - r) - model.ballistic_free_energy(r, Theta, Theta);
}

CoercivityReport coercivity_check(const ThermoModel& model, const EssentialWindow& window,
                                  std::span<const StatePoint> samples, std::span<const StatePoint> references) {
  window.validate();
  if (samples.empty()) throw PreconditionError("coercivity_check: empty sample set");
  if (references.empty()) throw PreconditionError("coercivity_check: empty reference set");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  CoercivityReport rep{kInf, kInf, kInf, kInf, kInf};

  for (const auto& ref : references) {
    for (const auto& s : samples) {
      if (s.rho == ref.rho && s.theta == ref.theta) continue;
      const double e = rel_entropy(model, s.rho, s.theta, ref.rho, ref.theta);
      rep.min_rel_entropy = std::min(rep.min_rel_entropy, e);
      if (window.contains(s.rho, s.theta)) {
        const double d2 = (s.rho - ref.rho) * (s.rho - ref.rho) + (s.theta - ref.theta) * (s.theta - ref.theta);
        rep.c_essential = std::min(rep.c_essential, e / d2);
        ++rep.inside;
      } else {
        const double rs = s.rho * model.entropy(s.rho, s.theta);
        const double re = s.rho * model.internal_energy(s.rho, s.theta);
        rep.c_residual = std::min(rep.c_residual, e / (1.0 + std::abs(rs) + re));
        ++rep.outside;
      }
      if (s.rho < window.rho_lo) {
        rep.c_below = std::min(rep.c_below, e / std::abs(s.rho - ref.rho));
        ++rep.below;
      } else if (s.rho > window.rho_hi) {
        rep.c_above = std::min(rep.c_above, e / s.rho);
        ++rep.above;
      }
    }
  }
  return rep;
}

CoercivityReport coercivity_check(const ThermoModel& model, const EssentialWindow& window, std::size_t samples,
                                  std::size_t references) {
  window.validate();
  if (samples == 0) throw PreconditionError("coercivity_check: empty sample set");
  if (references == 0) throw PreconditionError("coercivity_check: empty reference set");

  std::vector<StatePoint> pts;
  pts.reserve(samples);
  const std::size_t inside = samples / 2;
  for (std::size_t i = 1; i <= inside; ++i) {
    pts.push_back({window.rho_lo + (window.rho_hi - window.rho_lo) * halton(i, 2),
                   window.theta_lo + (window.theta_hi - window.theta_lo) * halton(i, 3)});
  }
  const double lr0 = std::log(window.rho_lo / 20.0), lr1 = std::log(4.0 * window.rho_hi);
  const double lt0 = std::log(window.theta_lo / 20.0), lt1 = std::log(4.0 * window.theta_hi);
  for (std::size_t i = 1; pts.size() < samples; ++i) {
    pts.push_back({std::exp(lr0 + (lr1 - lr0) * halton(i, 5)), std::exp(lt0 + (lt1 - lt0) * halton(i, 7))});
  }

  std::vector<StatePoint> refs;
  const double rq = 0.25 * (window.rho_hi - window.rho_lo);
  const double tq = 0.25 * (window.theta_hi - window.theta_lo);
  for (std::size_t i = 1; i <= references; ++i) {
    refs.push_back({window.rho_lo + rq + 2.0 * rq * halton(i, 11), window.theta_lo + tq + 2.0 * tq * halton(i, 13)});
  }
  return coercivity_check(model, window, pts, refs);
}

SplitField essential_residual_split(std::span<const double> h, std::span<const double> rho,
                                    std::span<const double> theta, const EssentialWindow& window) {
  if (h.size() != rho.size() || h.size() != theta.size())
    throw PreconditionError("essential_residual_split: field sizes differ");
  SplitField out{std::vector<double>(h.size(), 0.0), std::vector<double>(h.size(), 0.0)};
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (window.contains(rho[i], theta[i]))
      out.essential[i] = h[i];
    else
      out.residual[i] = h[i];
  }
  return out;
}

std::vector<double> cross_section_average(const Grid3D& grid, std::span<const double> field) {
  if (field.size() != grid.size()) throw PreconditionError("cross_section_average: field does not match grid");
  std::vector<double> avg(static_cast<std::size_t>(grid.n3), 0.0);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      const double* row = field.data() + grid.index(i, j, 0);
      for (int k = 0; k < grid.n3; ++k) avg[k] += row[k];
    }
  const double inv = 1.0 / (static_cast<double>(grid.n1) * grid.n2);
  for (double& v : avg) v *= inv;
  return avg;
}

ScaledNormSample scaled_norms(const ThermoModel& model, const State3D& state, const State1D& reference,
                              std::span<const double> r_exponents) {
  const Grid3D& g = state.grid;
  if (reference.n <= 0 || g.n3 % reference.n != 0)
    throw PreconditionError("scaled_norms: 3D axial grid does not refine the 1D grid");
  if (state.rho.size() != g.size()) throw PreconditionError("scaled_norms: state does not match its grid");
  for (double r : r_exponents)
    if (!(r >= 1.0 && r < 2.0)) throw PreconditionError("scaled_norms: velocity exponent must lie in [1, 2)");
  const int ratio = g.n3 / reference.n;

  ScaledNormSample out;
  out.time = state.t;
  out.r.assign(r_exponents.begin(), r_exponents.end());
  out.u_norm.assign(out.r.size(), 0.0);

  const double w = g.cell_volume() / g.cross_section_measure();
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const std::size_t c = g.index(i, j, k);
        const int k1 = k / ratio;
        const double rr = reference.rho[k1], tr = reference.theta[k1], ur = reference.u[k1];
        const double drho = std::abs(state.rho[c] - rr);
        const double dth = state.theta[c] - tr;
        const double du3 = state.u3[c] - ur;
        const double du2 = state.u1[c] * state.u1[c] + state.u2[c] * state.u2[c] + du3 * du3;
        out.rho_norm += w * drho * std::cbrt(drho * drho);
        out.theta_norm += w * dth * dth;
        out.rel_entropy +=
            w * (0.5 * state.rho[c] * du2 + std::max(0.0, rel_entropy(model, state.rho[c], state.theta[c], rr, tr)));
        const double du = std::sqrt(du2);
        for (std::size_t m = 0; m < out.r.size(); ++m) out.u_norm[m] += w * std::pow(du, out.r[m]);
      }
  return out;
}

void ScaledNormReport::add(const ScaledNormSample& s) {
  if (!started_) {
    r = s.r;
    velocity_norm_r.assign(r.size(), 0.0);
    last_u_ = s.u_norm;
    last_time_ = s.time;
    started_ = true;
  } else {
    if (s.r != r) throw PreconditionError("ScaledNormReport: exponent list changed between samples");
    if (s.time < last_time_) throw PreconditionError("ScaledNormReport: samples out of time order");
    const double dt = s.time - last_time_;
    for (std::size_t m = 0; m < r.size(); ++m) velocity_norm_r[m] += 0.5 * dt * (last_u_[m] + s.u_norm[m]);
    last_u_ = s.u_norm;
    last_time_ = s.time;
  }
  sup_t_density_norm = std::max(sup_t_density_norm, s.rho_norm);
  sup_t_temperature_norm = std::max(sup_t_temperature_norm, s.theta_norm);
  sup_t_rel_entropy = std::max(sup_t_rel_entropy, s.rel_entropy);
  rel_entropy_trace.emplace_back(s.time, s.rel_entropy);
}

}  // namespace nsf
