#include "nsf/solver3d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "scheme.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

using Array = std::vector<double>;

struct Primitive3D {
  Array rho;
  std::array<Array, 3> u;
  Array theta, p, E;
};

using Conservative3D = std::array<Array, 5>;  // rho, m1, m2, m3, E

struct Axis {
  int n;
  std::size_t stride;
  double h;
};

std::array<Axis, 3> axes(const Grid3D& g) {
  return {Axis{g.n1, static_cast<std::size_t>(g.n2) * g.n3, g.h1}, Axis{g.n2, static_cast<std::size_t>(g.n3), g.h2},
          Axis{g.n3, 1, g.h3}};
}

// Derivative along one axis at a cell centre; `odd` marks the component
// normal to the walls of that axis.
inline double cell_derivative(const double* v, std::size_t c, int m, const Axis& ax, bool odd) {
  if (m == 0) {
    return odd ? detail::odd_cell_derivative(v[c], v[c + ax.stride], ax.h)
               : detail::even_cell_derivative(v[c], v[c + ax.stride], ax.h);
  }
  if (m == ax.n - 1) {
    return odd ? -detail::odd_cell_derivative(v[c], v[c - ax.stride], ax.h)
               : -detail::even_cell_derivative(v[c], v[c - ax.stride], ax.h);
  }
  return (v[c + ax.stride] - v[c - ax.stride]) / (2.0 * ax.h);
}

template <int D>
void axis_gradients(const Grid3D& g, const std::array<Array, 3>& u, const Axis& a, std::vector<Mat3>& grad) {
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const std::size_t c = g.index(i, j, k);
        const int m = D == 0 ? i : D == 1 ? j : k;
        Mat3& G = grad[c];
        if (m > 0 && m < a.n - 1) {
          for (int comp = 0; comp < 3; ++comp) G[comp][D] = (u[comp][c + a.stride] - u[comp][c - a.stride]) / (2.0 * a.h);
        } else {
          for (int comp = 0; comp < 3; ++comp) G[comp][D] = cell_derivative(u[comp].data(), c, m, a, comp == D);
        }
      }
}

void velocity_gradients(const Grid3D& g, const std::array<Array, 3>& u, std::vector<Mat3>& grad) {
  const auto ax = axes(g);
  grad.resize(g.size());
  axis_gradients<0>(g, u, ax[0], grad);
  axis_gradients<1>(g, u, ax[1], grad);
  axis_gradients<2>(g, u, ax[2], grad);
}

Vec3 temperature_gradient(const Grid3D& g, const std::array<Axis, 3>& ax, const Array& theta, int i, int j, int k) {
  const std::size_t c = g.index(i, j, k);
  const int m[3] = {i, j, k};
  Vec3 out{};
  for (int d = 0; d < 3; ++d) out[d] = cell_derivative(theta.data(), c, m[d], ax[d], false);
  return out;
}

// S:G / theta + kappa |grad theta|^2 / theta^2 written as a sum of squares.
double sigma_at(const ThermoModel& model, const Mat3& G, const Vec3& gt, double theta) {
  const double tr = trace(G);
  double dd = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double d = G[a][b] + G[b][a] - (a == b ? (2.0 / 3.0) * tr : 0.0);
      dd += d * d;
    }
  const double visc = 0.5 * model.mu(theta) * dd + model.eta(theta) * tr * tr;
  return visc / theta + model.kappa(theta) * dot(gt, gt) / (theta * theta);
}

// Adds the interior face fluxes normal to axis D.
template <int D>
void add_face_fluxes(const ThermoModel& model, const Grid3D& g, const Primitive3D& w, const std::vector<Mat3>& grad,
                     const Axis& a, Conservative3D& r) {
  constexpr int T1 = (D + 1) % 3, T2 = (D + 2) % 3;
  const double inv_h = 1.0 / a.h;
  const double two_thirds = 2.0 / 3.0;
  const int hi[3] = {g.n1 - (D == 0), g.n2 - (D == 1), g.n3 - (D == 2)};
  const double* rho = w.rho.data();
  const double* th = w.theta.data();
  const double* p = w.p.data();
  const double* E = w.E.data();
  const double* u[3] = {w.u[0].data(), w.u[1].data(), w.u[2].data()};
  double* out[5] = {r[0].data(), r[1].data(), r[2].data(), r[3].data(), r[4].data()};
  for (int i = 0; i < hi[0]; ++i)
    for (int j = 0; j < hi[1]; ++j)
      for (int k = 0; k < hi[2]; ++k) {
        const std::size_t L = g.index(i, j, k), R = L + a.stride;
        const double tf = 0.5 * (th[L] + th[R]);
        const double mu = model.mu(tf);
        const double lam = model.eta(tf) - two_thirds * mu;
        const Mat3& GL = grad[L];
        const Mat3& GR = grad[R];
        double ul[3], ur[3], col[3];
        for (int jj = 0; jj < 3; ++jj) {
          ul[jj] = u[jj][L];
          ur[jj] = u[jj][R];
          col[jj] = (ur[jj] - ul[jj]) * inv_h;
        }
        const double tr = col[D] + 0.5 * (GL[T1][T1] + GR[T1][T1]) + 0.5 * (GL[T2][T2] + GR[T2][T2]);
        double S[3];
        S[D] = mu * (2.0 * col[D]) + lam * tr;
        S[T1] = mu * (col[T1] + 0.5 * (GL[D][T1] + GR[D][T1]));
        S[T2] = mu * (col[T2] + 0.5 * (GL[D][T2] + GR[D][T2]));
        const double q = -model.kappa(tf) * (th[R] - th[L]) * inv_h;
        const double rl = rho[L], rr = rho[R];
        const double udl = ul[D], udr = ur[D];
        const double pl = p[L], pr = p[R];
        double F[5];
        F[0] = 0.5 * (rl * udl + rr * udr);
        double work = 0.0;
        for (int jj = 0; jj < 3; ++jj) {
          F[1 + jj] = 0.5 * (rl * ul[jj] * udl + rr * ur[jj] * udr) - S[jj];
          work += 0.5 * (ul[jj] + ur[jj]) * S[jj];
        }
        F[1 + D] += 0.5 * (pl + pr);
        F[4] = 0.5 * ((E[L] + pl) * udl + (E[R] + pr) * udr) - work + q;
        for (int v = 0; v < 5; ++v) {
          out[v][L] -= F[v] * inv_h;
          out[v][R] += F[v] * inv_h;
        }
      }
}

// Adds the wall momentum flux on both walls normal to axis D.
template <int D>
void add_wall_fluxes(const ThermoModel& model, const Grid3D& g, const Primitive3D& w, const std::vector<Mat3>& grad,
                     const Axis& a, Conservative3D& r) {
  constexpr int T1 = (D + 1) % 3, T2 = (D + 2) % 3;
  const double inv_h = 1.0 / a.h;
  const double two_thirds = 2.0 / 3.0;
  const int n[3] = {g.n1, g.n2, g.n3};
  int m[3];
  for (int side = 0; side < 2; ++side) {
    const bool low = side == 0;
    m[D] = low ? 0 : a.n - 1;
    const double sign = low ? 1.0 : -1.0;
    for (m[T1] = 0; m[T1] < n[T1]; ++m[T1])
      for (m[T2] = 0; m[T2] < n[T2]; ++m[T2]) {
        const std::size_t c = g.index(m[0], m[1], m[2]);
        const std::size_t c1 = low ? c + a.stride : c - a.stride;
        const double tw = detail::wall_temperature(w.theta[c], w.theta[c1]);
        const double mu = model.mu(tw);
        const double lam = model.eta(tw) - two_thirds * mu;
        const double gdd = sign * detail::wall_normal_derivative(w.u[D][c], w.u[D][c1], a.h);
        const double tr = gdd + (1.5 * grad[c][T1][T1] - 0.5 * grad[c1][T1][T1]) +
                          (1.5 * grad[c][T2][T2] - 0.5 * grad[c1][T2][T2]);
        const double fw = detail::wall_pressure(w.p[c], w.p[c1]) - (2.0 * mu * gdd + lam * tr);
        r[1 + D][c] += sign * fw * inv_h;
      }
  }
}

void rhs(const ThermoModel& model, const Grid3D& g, const Primitive3D& w, const std::vector<Mat3>& grad,
         Conservative3D& r) {
  for (auto& a : r) a.assign(g.size(), 0.0);
  const auto ax = axes(g);
  add_face_fluxes<0>(model, g, w, grad, ax[0], r);
  add_face_fluxes<1>(model, g, w, grad, ax[1], r);
  add_face_fluxes<2>(model, g, w, grad, ax[2], r);
  add_wall_fluxes<0>(model, g, w, grad, ax[0], r);
  add_wall_fluxes<1>(model, g, w, grad, ax[1], r);
  add_wall_fluxes<2>(model, g, w, grad, ax[2], r);
}

}  // namespace

double PerturbationSpec::amplitude(double epsilon) const { return delta * std::pow(epsilon, alpha); }

State3D lift_initial_data(const State1D& ref, const PerturbationSpec& spec, const Grid3D& g) {
  ref.validate();
  if (g.n3 % ref.n != 0) throw PreconditionError("lift_initial_data: axial grid does not refine the 1D grid");
  if (!std::isfinite(spec.delta) || !std::isfinite(spec.alpha))
    throw PreconditionError("lift_initial_data: nonfinite perturbation amplitude");
  const CrossSection& q = g.q;
  const double w1 = q.b - q.a, w2 = q.d - q.c;
  const int m1 = spec.mode1, m2 = spec.mode2;
  auto s1 = [=](double x) { return (x - q.a) / w1; };
  auto s2 = [=](double x) { return (x - q.c) / w2; };
  const PerturbationSpec::Field phi_rho =
      spec.phi_rho ? spec.phi_rho
                   : [=](double x1, double, double y) { return std::cos(2 * kPi * m1 * s1(x1)) * std::sin(kPi * y); };
  const PerturbationSpec::Field phi_theta =
      spec.phi_theta ? spec.phi_theta
                     : [=](double, double x2, double y) { return std::cos(2 * kPi * m2 * s2(x2)) * std::sin(kPi * y); };
  const PerturbationSpec::Field psi1 =
      spec.psi1 ? spec.psi1
                : [=](double x1, double, double y) { return std::sin(2 * kPi * m1 * s1(x1)) * std::sin(kPi * y); };
  const PerturbationSpec::Field psi2 =
      spec.psi2 ? spec.psi2
                : [=](double, double x2, double y) { return std::sin(2 * kPi * m2 * s2(x2)) * std::sin(kPi * y); };
  const PerturbationSpec::Field psi3 =
      spec.psi3 ? spec.psi3
                : [=](double x1, double, double y) { return std::cos(2 * kPi * m1 * s1(x1)) * std::sin(kPi * y); };

  const double amp = spec.amplitude(g.epsilon);
  if (amp != 0.0) {
    constexpr int kProbe = 17;
    for (int a = 0; a <= kProbe; ++a)
      for (int b = 0; b <= kProbe; ++b) {
        const double t1 = static_cast<double>(a) / kProbe, t2 = static_cast<double>(b) / kProbe;
        const double x1 = q.a + t1 * w1, x2 = q.c + t2 * w2;
        if (std::abs(psi1(q.a, x2, t1)) > 1e-12 || std::abs(psi1(q.b, x2, t1)) > 1e-12)
          throw PreconditionError("lift_initial_data: psi1 does not vanish on the x1 walls");
        if (std::abs(psi2(x1, q.c, t1)) > 1e-12 || std::abs(psi2(x1, q.d, t1)) > 1e-12)
          throw PreconditionError("lift_initial_data: psi2 does not vanish on the x2 walls");
        if (std::abs(psi3(x1, x2, 0.0)) > 1e-12 || std::abs(psi3(x1, x2, 1.0)) > 1e-12)
          throw PreconditionError("lift_initial_data: psi3 does not vanish at y = 0 and y = 1");
      }
  }

  State3D s(g);
  s.t = ref.t;
  const int ratio = g.n3 / ref.n;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const std::size_t c = g.index(i, j, k);
        const int k1 = k / ratio;
        const double x1 = g.xi1(i), x2 = g.xi2(j), y = g.y(k);
        s.rho[c] = ref.rho[k1];
        s.theta[c] = ref.theta[k1];
        s.u1[c] = 0.0;
        s.u2[c] = 0.0;
        s.u3[c] = ref.u[k1];
        if (amp != 0.0) {
          s.rho[c] *= 1.0 + amp * phi_rho(x1, x2, y);
          s.theta[c] *= 1.0 + amp * phi_theta(x1, x2, y);
          s.u1[c] = amp * psi1(x1, x2, y);
          s.u2[c] = amp * psi2(x1, x2, y);
          s.u3[c] += amp * psi3(x1, x2, y);
        }
      }
  try {
    s.validate();
  } catch (const PreconditionError&) {
    throw PreconditionError("lift_initial_data: perturbed density or temperature is not positive");
  }
  return s;
}

struct Solver3D::Impl {
  ThermoModel model;
  State3D state;
  Balance3D bal;

  // Data attached to the current state.
  Primitive3D w;
  Array e, e_rho, c_v, cbrt_rho;
  std::vector<Mat3> grad;
  Conservative3D r;
  double dt_limit = 0.0;
  double entropy_rate = 0.0;
  double sigma_total = 0.0;
  double sigma_min = 0.0;
  double entropy_total = 0.0;

  Impl(const ThermoModel& m, const State3D& s) : model(m), state(s) {
    state.validate();
    build();
    bal.t = state.t;
    bal.sigma_min = sigma_min;
    fill_totals();
  }

  void fill_totals() {
    const double vol = state.grid.cell_volume();
    double mass = 0.0, energy = 0.0;
    for (std::size_t c = 0; c < w.rho.size(); ++c) {
      mass += w.rho[c];
      energy += w.E[c];
    }
    bal.mass = mass * vol;
    bal.energy = energy * vol;
    bal.entropy = entropy_total;
  }

  void build() {
    const Grid3D& g = state.grid;
    const std::size_t n = g.size();
    w.rho = state.rho;
    w.u = {state.u1, state.u2, state.u3};
    w.theta = state.theta;
    const bool warm = cbrt_rho.size() == n;  // cube roots of the previous state seed the new ones
    cbrt_rho.resize(n);
    w.p.resize(n);
    w.E.resize(n);
    e.resize(n);
    e_rho.resize(n);
    c_v.resize(n);

    const double i1 = 1.0 / g.h1, i2 = 1.0 / g.h2, i3 = 1.0 / g.h3;
    const double inv_h2 = i1 * i1 + i2 * i2 + i3 * i3;
    double adv = 0.0, rho_min = std::numeric_limits<double>::infinity(), cv_min = rho_min, nu_max = 0.0, k_max = 0.0;
    double s_total = 0.0;
    s_spec.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      const double rho = w.rho[c], th = w.theta[c];
      const double u1 = w.u[0][c], u2 = w.u[1][c], u3 = w.u[2][c];
      if (!(rho > 0.0) || !(th > 0.0)) throw DomainError("solver3d: nonpositive density or temperature");
      const double cr = warm ? detail::cbrt_near(rho, cbrt_rho[c]) : std::cbrt(rho);
      cbrt_rho[c] = cr;
      const ThermoPoint tp = model.evaluate(rho, th, cr * cr);
      w.p[c] = tp.p;
      w.E[c] = 0.5 * rho * (u1 * u1 + u2 * u2 + u3 * u3) + rho * tp.e;
      e[c] = tp.e;
      e_rho[c] = (1.5 * tp.dp_drho - tp.e) / rho;
      c_v[c] = tp.de_dtheta;
      const double cs = ThermoModel::sound_speed(rho, th, tp);
      adv = std::max(adv, (std::abs(u1) + cs) * i1 + (std::abs(u2) + cs) * i2 + (std::abs(u3) + cs) * i3);
      rho_min = std::min(rho_min, rho);
      cv_min = std::min(cv_min, tp.de_dtheta);
      nu_max = std::max(nu_max, model.nu(th));
      k_max = std::max(k_max, model.kappa(th));
      s_spec[c] = model.entropy(rho, th);
      s_total += rho * s_spec[c];
    }
    dt_limit = std::min({1.0 / adv, rho_min / (2.0 * nu_max * inv_h2), rho_min * cv_min / (2.0 * k_max * inv_h2)});

    velocity_gradients(g, w.u, grad);
    rhs(model, g, w, grad, r);

    const double vol = g.cell_volume();
    const auto ax = axes(g);
    double rate = 0.0, sig = 0.0, sig_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        for (int k = 0; k < g.n3; ++k) {
          const std::size_t c = g.index(i, j, k);
          const double th = w.theta[c], rho = w.rho[c];
          const double u1 = w.u[0][c], u2 = w.u[1][c], u3 = w.u[2][c];
          const double ke = 0.5 * (u1 * u1 + u2 * u2 + u3 * u3);
          const double v_rho = s_spec[c] - (e[c] + w.p[c] / rho - ke) / th;
          rate += v_rho * r[0][c] - (u1 * r[1][c] + u2 * r[2][c] + u3 * r[3][c]) / th + r[4][c] / th;
          const double sc = sigma_at(model, grad[c], temperature_gradient(g, ax, w.theta, i, j, k), th);
          sig += sc;
          sig_min = std::min(sig_min, sc);
        }
    entropy_rate = rate * vol;
    sigma_total = sig * vol;
    sigma_min = sig_min;
    entropy_total = s_total * vol;
  }

  // Fills `out` from conservative variables; throws before touching the state.
  void recover(const Conservative3D& u, double t, Primitive3D& out) const {
    const std::size_t n = u[0].size();
    out.rho = u[0];
    out.E = u[4];
    for (auto& comp : out.u) comp.resize(n);
    out.theta.resize(n);
    out.p.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      const double rho = u[0][c];
      if (!(rho > 0.0) || !std::isfinite(rho))
        throw SolverError("solver3d: density lost positivity in cell " + std::to_string(c) + " at t = " +
                          std::to_string(t));
      const double v1 = u[1][c] / rho, v2 = u[2][c] / rho, v3 = u[3][c] / rho;
      out.u[0][c] = v1;
      out.u[1][c] = v2;
      out.u[2][c] = v3;
      const double ei = u[4][c] / rho - 0.5 * (v1 * v1 + v2 * v2 + v3 * v3);
      const double guess = w.theta[c] + (ei - e[c] - e_rho[c] * (rho - w.rho[c])) / c_v[c];
      const double cr = detail::cbrt_near(rho, cbrt_rho[c]);
      const EnergyInversion inv = model.invert_energy(rho, ei, guess > 0.0 ? guess : w.theta[c], cr * cr);
      out.theta[c] = inv.theta;
      out.p[c] = inv.p;
    }
  }

  void advance(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("Solver3D::advance: dt must be positive");
    if (dt > dt_limit * (1.0 + 1e-12))
      throw PreconditionError("Solver3D::advance: dt = " + std::to_string(dt) + " exceeds the stability limit " +
                              std::to_string(dt_limit));
    const Grid3D& g = state.grid;
    const std::size_t n = g.size();
    u0[0] = w.rho;
    u0[4] = w.E;
    for (int d = 0; d < 3; ++d) {
      u0[1 + d].resize(n);
      for (std::size_t c = 0; c < n; ++c) u0[1 + d][c] = w.rho[c] * w.u[d][c];
    }
    for (int v = 0; v < 5; ++v) {
      u1[v].resize(n);
      for (std::size_t c = 0; c < n; ++c) u1[v][c] = u0[v][c] + dt * r[v][c];
    }
    const double t1 = state.t + dt;
    recover(u1, t1, w1);
    velocity_gradients(g, w1.u, g1);
    rhs(model, g, w1, g1, r1);
    for (int v = 0; v < 5; ++v) {
      u2[v].resize(n);
      for (std::size_t c = 0; c < n; ++c) u2[v][c] = 0.5 * (u0[v][c] + u1[v][c] + dt * r1[v][c]);
    }
    recover(u2, t1, w2);

    const double rate0 = entropy_rate, sigma0 = sigma_total;
    state.t = t1;
    state.rho.swap(w2.rho);
    state.u1.swap(w2.u[0]);
    state.u2.swap(w2.u[1]);
    state.u3.swap(w2.u[2]);
    state.theta.swap(w2.theta);
    build();
    bal.t = t1;
    bal.production += 0.5 * dt * (rate0 + entropy_rate);
    bal.sigma_integral += 0.5 * dt * (sigma0 + sigma_total);
    bal.sigma_min = std::min(bal.sigma_min, sigma_min);
    fill_totals();
  }

 private:
  // Scratch space reused across steps.
  Conservative3D u0, u1, u2, r1;
  Primitive3D w1, w2;
  std::vector<Mat3> g1;
  Array s_spec;
};

Solver3D::Solver3D(const ThermoModel& model, const State3D& initial)
    : impl_(std::make_unique<Impl>(model, initial)) {}
Solver3D::~Solver3D() = default;
Solver3D::Solver3D(Solver3D&&) noexcept = default;
Solver3D& Solver3D::operator=(Solver3D&&) noexcept = default;

const State3D& Solver3D::state() const { return impl_->state; }
const Balance3D& Solver3D::balance() const { return impl_->bal; }
double Solver3D::stable_dt(double cfl) const {
  if (!(cfl > 0.0)) throw PreconditionError("Solver3D::stable_dt: cfl must be positive");
  return cfl * impl_->dt_limit;
}
void Solver3D::advance(double dt) { impl_->advance(dt); }

State3D step3d(const ThermoModel& model, const State3D& state, double dt) {
  Solver3D solver(model, state);
  solver.advance(dt);
  return solver.state();
}

double stable_dt_3d(const ThermoModel& model, const State3D& state, double cfl) {
  return Solver3D(model, state).stable_dt(cfl);
}

std::vector<double> entropy_production_3d(const ThermoModel& model, const State3D& s) {
  s.validate();
  const Grid3D& g = s.grid;
  std::vector<Mat3> grad;
  velocity_gradients(g, {s.u1, s.u2, s.u3}, grad);
  const auto ax = axes(g);
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const std::size_t c = g.index(i, j, k);
        out[c] = sigma_at(model, grad[c], temperature_gradient(g, ax, s.theta, i, j, k), s.theta[c]);
      }
  return out;
}

Trajectory3D integrate3d(const ThermoModel& model, const State3D& initial, double t_final,
                         const Integrate3DOptions& options) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw PreconditionError("integrate3d: t_final must be >= 0");
  if (options.outputs < 1) throw PreconditionError("integrate3d: need at least one output");
  Solver3D solver(model, initial);
  Trajectory3D traj;
  traj.snapshots.push_back(solver.state());
  traj.balance.push_back(solver.balance());
  if (t_final == 0.0) return traj;
  const double t0 = initial.t;
  for (int k = 1; k <= options.outputs; ++k) {
    const double t_next = t0 + t_final * k / options.outputs;
    while (solver.state().t < t_next - 1e-12 * t_final) {
      const double t = solver.state().t;
      double dt = solver.stable_dt(options.cfl);
      if (t + dt >= t_next - 1e-12 * t_final) dt = t_next - t;
      try {
        solver.advance(dt);
      } catch (const SolverError& e) {
        throw SolverError("integrate3d: step failed at t = " + std::to_string(t) + ": " + e.what());
      }
      if (options.on_step) options.on_step(solver.state(), dt);
    }
    traj.snapshots.push_back(solver.state());
    traj.balance.push_back(solver.balance());
  }
  return traj;
}

std::vector<DissipationLedger> dissipation_ledger(const Trajectory3D& traj, double theta_bar) {
  if (!(theta_bar > 0.0) || !std::isfinite(theta_bar))
    throw PreconditionError("dissipation_ledger: theta_bar must be positive");
  if (traj.balance.empty()) throw PreconditionError("dissipation_ledger: empty trajectory");
  std::vector<DissipationLedger> out;
  const Balance3D& b0 = traj.balance.front();
  const double initial = b0.energy - theta_bar * b0.entropy;
  for (const auto& b : traj.balance) {
    DissipationLedger l;
    l.t = b.t;
    l.energy_term = b.energy - theta_bar * b.entropy;
    l.production = theta_bar * b.production;
    l.total = l.energy_term + l.production;
    l.initial_total = initial;
    out.push_back(l);
  }
  return out;
}

double ledger_imbalance(const std::vector<DissipationLedger>& ledger) {
  double worst = 0.0;
  for (const auto& l : ledger)
    worst = std::max(worst, std::abs(l.total - l.initial_total) / std::max(1.0, std::abs(l.initial_total)));
  return worst;
}

}  // namespace nsf
