#include "nsf/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scheme.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

struct Primitive1D {
  std::vector<double> rho, u, theta, p, E;
};

struct Conservative1D {
  std::vector<double> rho, m, E;
};

// Primitive state at the start of a step together with the thermodynamic
// data needed for the stability limit and for linearised temperature guesses.
struct Frame {
  Primitive1D w;
  std::vector<double> e, e_rho, c_v, cbrt_rho;
  double dt_limit = 0.0;  // stability limit with cfl = 1
};

// Buffers reused from step to step.
struct Workspace {
  Frame frame;
  Conservative1D u0, u1, u2, r0, r1;
  Primitive1D w1, w2;
  std::vector<double> fr, fm, fe;
};

void resize(Conservative1D& c, std::size_t n) {
  c.rho.resize(n);
  c.m.resize(n);
  c.E.resize(n);
}

void make_frame(const ThermoModel& model, const State1D& s, Frame& fr) {
  const std::size_t n = s.rho.size();
  const bool warm = fr.cbrt_rho.size() == n;  // cube roots of the previous frame seed the new ones
  fr.w.rho = s.rho;
  fr.w.u = s.u;
  fr.w.theta = s.theta;
  for (auto* v : {&fr.w.p, &fr.w.E, &fr.e, &fr.e_rho, &fr.c_v, &fr.cbrt_rho}) v->resize(n);
  double adv = 0.0, rho_min = std::numeric_limits<double>::infinity(), cv_min = rho_min, nu_max = 0.0, k_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = s.rho[i], th = s.theta[i], u = s.u[i];
    if (!(rho > 0.0) || !(th > 0.0)) throw DomainError("solver1d: nonpositive density or temperature");
    const double c = warm ? detail::cbrt_near(rho, fr.cbrt_rho[i]) : std::cbrt(rho);
    const ThermoPoint tp = model.evaluate(rho, th, c * c);
    fr.cbrt_rho[i] = c;
    fr.w.p[i] = tp.p;
    fr.w.E[i] = 0.5 * rho * u * u + rho * tp.e;
    fr.e[i] = tp.e;
    fr.e_rho[i] = (1.5 * tp.dp_drho - tp.e) / rho;
    fr.c_v[i] = tp.de_dtheta;
    adv = std::max(adv, std::abs(u) + ThermoModel::sound_speed(rho, th, tp));
    rho_min = std::min(rho_min, rho);
    cv_min = std::min(cv_min, tp.de_dtheta);
    nu_max = std::max(nu_max, model.nu(th));
    k_max = std::max(k_max, model.kappa(th));
  }
  const double h2 = s.h * s.h;
  fr.dt_limit = std::min({s.h / adv, h2 * rho_min / (2.0 * nu_max), h2 * rho_min * cv_min / (2.0 * k_max)});
}

Frame make_frame(const ThermoModel& model, const State1D& s) {
  Frame fr;
  make_frame(model, s, fr);
  return fr;
}

void recover(const ThermoModel& model, const Conservative1D& c, const Frame& f0, double t, Primitive1D& w) {
  const std::size_t n = c.rho.size();
  w.rho = c.rho;
  w.E = c.E;
  w.u.resize(n);
  w.theta.resize(n);
  w.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = c.rho[i];
    if (!(rho > 0.0) || !std::isfinite(rho))
      throw SolverError("solver1d: density lost positivity in cell " + std::to_string(i) + " at t = " +
                        std::to_string(t));
    w.u[i] = c.m[i] / rho;
    const double e = (c.E[i] - 0.5 * c.m[i] * w.u[i]) / rho;
    const double guess = f0.w.theta[i] + (e - f0.e[i] - f0.e_rho[i] * (rho - f0.w.rho[i])) / f0.c_v[i];
    const double cr = detail::cbrt_near(rho, f0.cbrt_rho[i]);
    const EnergyInversion inv = model.invert_energy(rho, e, guess > 0.0 ? guess : f0.w.theta[i], cr * cr);
    w.theta[i] = inv.theta;
    w.p[i] = inv.p;
  }
}

void rhs(const ThermoModel& model, const Primitive1D& w, double h, double t, const Source1D& source, Workspace& ws,
         Conservative1D& out) {
  const std::size_t n = w.rho.size();
  auto& fr = ws.fr;
  auto& fm = ws.fm;
  auto& fe = ws.fe;
  fr.assign(n + 1, 0.0);
  fm.assign(n + 1, 0.0);
  fe.assign(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) {
    const std::size_t l = f - 1, r = f;
    const double tf = 0.5 * (w.theta[l] + w.theta[r]);
    const double s = model.nu(tf) * (w.u[r] - w.u[l]) / h;
    const double q = -model.kappa(tf) * (w.theta[r] - w.theta[l]) / h;
    const double ml = w.rho[l] * w.u[l], mr = w.rho[r] * w.u[r];
    fr[f] = 0.5 * (ml + mr);
    fm[f] = 0.5 * (ml * w.u[l] + w.p[l] + mr * w.u[r] + w.p[r]) - s;
    fe[f] = 0.5 * ((w.E[l] + w.p[l]) * w.u[l] + (w.E[r] + w.p[r]) * w.u[r]) - 0.5 * (w.u[l] + w.u[r]) * s + q;
  }
  {
    const double tw = detail::wall_temperature(w.theta[0], w.theta[1]);
    fm[0] = detail::wall_pressure(w.p[0], w.p[1]) - model.nu(tw) * detail::wall_normal_derivative(w.u[0], w.u[1], h);
  }
  {
    const double tw = detail::wall_temperature(w.theta[n - 1], w.theta[n - 2]);
    fm[n] = detail::wall_pressure(w.p[n - 1], w.p[n - 2]) +
            model.nu(tw) * detail::wall_normal_derivative(w.u[n - 1], w.u[n - 2], h);
  }
  resize(out, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.rho[i] = -(fr[i + 1] - fr[i]) / h;
    out.m[i] = -(fm[i + 1] - fm[i]) / h;
    out.E[i] = -(fe[i + 1] - fe[i]) / h;
  }
  if (source) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = source((i + 0.5) * h, t);
      out.rho[i] += s[0];
      out.m[i] += s[1];
      out.E[i] += s[2];
    }
  }
}

double cell_du(const std::vector<double>& u, std::size_t i, double h) {
  const std::size_t n = u.size();
  if (i == 0) return detail::odd_cell_derivative(u[0], u[1], h);
  if (i == n - 1) return -detail::odd_cell_derivative(u[n - 1], u[n - 2], h);
  return (u[i + 1] - u[i - 1]) / (2.0 * h);
}

double cell_dtheta(const std::vector<double>& th, std::size_t i, double h) {
  const std::size_t n = th.size();
  if (i == 0) return detail::even_cell_derivative(th[0], th[1], h);
  if (i == n - 1) return -detail::even_cell_derivative(th[n - 1], th[n - 2], h);
  return (th[i + 1] - th[i - 1]) / (2.0 * h);
}

}  // namespace

double ModeTerm::operator()(double y) const {
  const double arg = kPi * mode * y;
  return base + amp * (sine ? std::sin(arg) : std::cos(arg));
}

ProfileSpec make_profile(const ModeTerm& rho, const ModeTerm& u, const ModeTerm& theta) {
  return ProfileSpec{rho, u, theta};
}

State1D init_smooth(const ProfileSpec& spec, int n) {
  if (n < 4) throw PreconditionError("init_smooth: need at least 4 cells");
  if (!spec.rho || !spec.u || !spec.theta) throw PreconditionError("init_smooth: incomplete profile");
  const double u0 = spec.u(0.0), u1 = spec.u(1.0);
  if (std::abs(u0) > 1e-10 || std::abs(u1) > 1e-10)
    throw PreconditionError("init_smooth: velocity must vanish at y = 0 and y = 1 (got " + std::to_string(u0) +
                            ", " + std::to_string(u1) + ")");
  constexpr int kProbe = 1000;
  for (int k = 0; k <= kProbe; ++k) {
    const double y = static_cast<double>(k) / kProbe;
    if (!(spec.rho(y) > 0.0) || !(spec.theta(y) > 0.0))
      throw PreconditionError("init_smooth: density and temperature must be positive (fails at y = " +
                              std::to_string(y) + ")");
  }
  State1D s;
  s.n = n;
  s.h = 1.0 / n;
  s.rho.resize(n);
  s.u.resize(n);
  s.theta.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y = s.y(i);
    s.rho[i] = spec.rho(y);
    s.u[i] = spec.u(y);
    s.theta[i] = spec.theta(y);
  }
  s.validate();
  return s;
}

double stable_dt_1d(const ThermoModel& model, const State1D& s, double cfl) {
  s.validate();
  if (!(cfl > 0.0)) throw PreconditionError("stable_dt_1d: cfl must be positive");
  return cfl * make_frame(model, s).dt_limit;
}

namespace {

// One Heun step from ws.frame, which must describe s; writes the result to out.
void advance(const ThermoModel& model, const State1D& s, double dt, const Source1D& source, Workspace& ws,
             State1D& out) {
  const std::size_t n = s.rho.size();
  const Frame& f0 = ws.frame;
  const Primitive1D& w0 = f0.w;
  Conservative1D& u0 = ws.u0;
  Conservative1D& u1 = ws.u1;
  Conservative1D& u2 = ws.u2;
  u0.rho = w0.rho;
  u0.E = w0.E;
  u0.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) u0.m[i] = w0.rho[i] * w0.u[i];

  rhs(model, w0, s.h, s.t, source, ws, ws.r0);
  resize(u1, n);
  for (std::size_t i = 0; i < n; ++i) {
    u1.rho[i] = u0.rho[i] + dt * ws.r0.rho[i];
    u1.m[i] = u0.m[i] + dt * ws.r0.m[i];
    u1.E[i] = u0.E[i] + dt * ws.r0.E[i];
  }
  recover(model, u1, f0, s.t + dt, ws.w1);
  rhs(model, ws.w1, s.h, s.t + dt, source, ws, ws.r1);
  resize(u2, n);
  for (std::size_t i = 0; i < n; ++i) {
    u2.rho[i] = 0.5 * (u0.rho[i] + u1.rho[i] + dt * ws.r1.rho[i]);
    u2.m[i] = 0.5 * (u0.m[i] + u1.m[i] + dt * ws.r1.m[i]);
    u2.E[i] = 0.5 * (u0.E[i] + u1.E[i] + dt * ws.r1.E[i]);
  }
  recover(model, u2, f0, s.t + dt, ws.w2);

  out.n = s.n;
  out.h = s.h;
  out.t = s.t + dt;
  out.rho.swap(ws.w2.rho);
  out.u.swap(ws.w2.u);
  out.theta.swap(ws.w2.theta);
}

}  // namespace

State1D step(const ThermoModel& model, const State1D& s, double dt, const Source1D& source) {
  s.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("step: dt must be positive");
  Workspace ws;
  make_frame(model, s, ws.frame);
  if (dt > ws.frame.dt_limit * (1.0 + 1e-12))
    throw PreconditionError("step: dt = " + std::to_string(dt) + " exceeds the stability limit " +
                            std::to_string(ws.frame.dt_limit));
  State1D out;
  advance(model, s, dt, source, ws, out);
  return out;
}

std::vector<double> entropy_production(const ThermoModel& model, const State1D& s) {
  s.validate();
  std::vector<double> sigma(s.rho.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double uy = cell_du(s.u, i, s.h);
    const double ty = cell_dtheta(s.theta, i, s.h);
    const double th = s.theta[i];
    sigma[i] = (model.nu(th) * uy * uy + model.kappa(th) * ty * ty / th) / th;
  }
  return sigma;
}

BalanceDiagnostics1D diagnostics(const ThermoModel& model, const State1D& s) {
  BalanceDiagnostics1D d;
  d.t = s.t;
  const auto energy = s.total_energy(model);
  for (int i = 0; i < s.n; ++i) {
    d.mass += s.rho[i] * s.h;
    d.energy += energy[i] * s.h;
  }
  const auto sigma = entropy_production(model, s);
  d.entropy_production_min = *std::min_element(sigma.begin(), sigma.end());
  return d;
}

Trajectory1D integrate(const ThermoModel& model, const State1D& initial, double t_final,
                       const IntegrateOptions& options) {
  initial.validate();
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw PreconditionError("integrate: t_final must be >= 0");
  if (options.outputs < 1) throw PreconditionError("integrate: need at least one output");
  Trajectory1D traj;
  traj.snapshots.push_back(initial);
  traj.diagnostics.push_back(diagnostics(model, initial));
  if (t_final == 0.0) return traj;

  State1D s = initial, next;
  Workspace ws;
  const double t0 = initial.t;
  for (int k = 1; k <= options.outputs; ++k) {
    const double t_next = t0 + t_final * k / options.outputs;
    while (s.t < t_next) {
      try {
        make_frame(model, s, ws.frame);
        double dt = options.cfl * ws.frame.dt_limit;
        if (s.t + dt >= t_next - 1e-12 * t_final) dt = t_next - s.t;
        advance(model, s, dt, options.source, ws, next);
        std::swap(s, next);
      } catch (const SolverError& e) {
        throw SolverError("integrate: step failed at t = " + std::to_string(s.t) + ": " + e.what());
      }
    }
    s.t = t_next;
    traj.snapshots.push_back(s);
    traj.diagnostics.push_back(diagnostics(model, s));
  }
  return traj;
}

namespace {

// Face values of the entropy flux rho s u + q / theta on faces 0..n.
std::vector<double> entropy_flux(const ThermoModel& model, const State1D& s) {
  const int n = s.n;
  const double h = s.h;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = s.rho[i] * model.entropy(s.rho[i], s.theta[i]) * s.u[i];
  const auto& th = s.theta;
  std::vector<double> phi(n + 1, 0.0);
  for (int f = 1; f < n; ++f) {
    double wf, tf, dtf;
    if (f == 1) {
      wf = 0.75 * w[0] + 0.5 * w[1] - 0.05 * w[2];
      tf = (93.0 * th[0] + 102.0 * th[1] - 11.0 * th[2]) / 184.0;
      dtf = (-25.0 * th[0] + 26.0 * th[1] - th[2]) / (23.0 * h);
    } else if (f == n - 1) {
      wf = 0.75 * w[n - 1] + 0.5 * w[n - 2] - 0.05 * w[n - 3];
      tf = (93.0 * th[n - 1] + 102.0 * th[n - 2] - 11.0 * th[n - 3]) / 184.0;
      dtf = -(-25.0 * th[n - 1] + 26.0 * th[n - 2] - th[n - 3]) / (23.0 * h);
    } else {
      wf = (-w[f - 2] + 7.0 * w[f - 1] + 7.0 * w[f] - w[f + 1]) / 12.0;
      tf = (-th[f - 2] + 7.0 * th[f - 1] + 7.0 * th[f] - th[f + 1]) / 12.0;
      dtf = (th[f - 2] - 27.0 * th[f - 1] + 27.0 * th[f] - th[f + 1]) / (24.0 * h);
    }
    phi[f] = wf - model.kappa(tf) * dtf / tf;
  }
  return phi;
}

}  // namespace

double entropy_balance_residual(const ThermoModel& model, std::span<const State1D> snaps) {
  if (snaps.size() < 3) throw PreconditionError("entropy_balance_residual: need at least 3 snapshots");
  const int n = snaps.front().n;
  if (n < 4) throw PreconditionError("entropy_balance_residual: need at least 4 cells");
  for (const auto& s : snaps) {
    s.validate();
    if (s.n != n) throw PreconditionError("entropy_balance_residual: snapshots on different grids");
  }
  for (std::size_t k = 1; k < snaps.size(); ++k)
    if (!(snaps[k].t > snaps[k - 1].t)) throw PreconditionError("entropy_balance_residual: times not increasing");

  auto rho_s = [&](const State1D& s) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = s.rho[i] * model.entropy(s.rho[i], s.theta[i]);
    return v;
  };

  double worst = 0.0;
  std::vector<double> prev = rho_s(snaps[0]), cur = rho_s(snaps[1]);
  for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
    const std::vector<double> next = rho_s(snaps[k + 1]);
    const double a = snaps[k].t - snaps[k - 1].t, b = snaps[k + 1].t - snaps[k].t;
    const double cm = -b / (a * (a + b)), c0 = (b - a) / (a * b), cp = a / (b * (a + b));
    const auto phi = entropy_flux(model, snaps[k]);
    const auto sigma = entropy_production(model, snaps[k]);
    const double h = snaps[k].h;
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dt_term = cm * prev[i] + c0 * cur[i] + cp * next[i];
      const double res = dt_term + (phi[i + 1] - phi[i]) / h - sigma[i];
      l1 += std::abs(res) * h;
    }
    worst = std::max(worst, l1);
    prev = cur;
    cur = next;
  }
  return worst;
}

}  // namespace nsf
