#include "nsf/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nsf/errors.hpp"

namespace nsf {

namespace {

constexpr double kPi = std::numbers::pi;

double axis_derivative(const double* v, std::size_t c, int m, int n, std::size_t stride, double h) {
  if (n == 2) return (m == 0 ? v[c + stride] - v[c] : v[c] - v[c - stride]) / h;
  if (m == 0) return (-3.0 * v[c] + 4.0 * v[c + stride] - v[c + 2 * stride]) / (2.0 * h);
  if (m == n - 1) return (3.0 * v[c] - 4.0 * v[c - stride] + v[c - 2 * stride]) / (2.0 * h);
  return (v[c + stride] - v[c - stride]) / (2.0 * h);
}

Vec3 scalar_gradient(const NodeGrid& g, const std::vector<double>& v, int i, int j, int k) {
  const std::size_t c = g.index(i, j, k);
  const std::size_t strides[3] = {static_cast<std::size_t>(g.n2) * g.n3, static_cast<std::size_t>(g.n3), 1};
  const int m[3] = {i, j, k};
  Vec3 out{};
  for (int d = 0; d < 3; ++d) out[d] = axis_derivative(v.data(), c, m[d], g.count(d), strides[d], g.h(d));
  return out;
}

double trapezoid_1d(int m, int n) { return (m == 0 || m == n - 1) ? 0.5 : 1.0; }

}  // namespace

NodeGrid NodeGrid::box(int n1, int n2, int n3, std::array<double, 3> length, std::array<double, 3> origin) {
  NodeGrid g;
  g.n1 = n1;
  g.n2 = n2;
  g.n3 = n3;
  g.length = length;
  g.origin = origin;
  g.validate();
  return g;
}

double NodeGrid::h_max() const noexcept { return std::max({h(0), h(1), h(2)}); }

double NodeGrid::weight(int i, int j, int k) const noexcept {
  return trapezoid_1d(i, n1) * h(0) * trapezoid_1d(j, n2) * h(1) * trapezoid_1d(k, n3) * h(2);
}

void NodeGrid::validate() const {
  if (n1 < 2 || n2 < 2 || n3 < 2) throw PreconditionError("NodeGrid: need at least 2 nodes per axis");
  for (double l : length)
    if (!(l > 0.0) || !std::isfinite(l)) throw PreconditionError("NodeGrid: box lengths must be positive");
}

DiscreteVectorField DiscreteVectorField::sample(const NodeGrid& g,
                                                const std::function<Vec3(double, double, double)>& f,
                                                std::array<bool, 3> normal_zero) {
  g.validate();
  DiscreteVectorField out;
  out.grid = g;
  out.normal_zero = normal_zero;
  for (auto& a : out.u) a.resize(g.size());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const Vec3 v = f(g.x(0, i), g.x(1, j), g.x(2, k));
        const std::size_t c = g.index(i, j, k);
        for (int d = 0; d < 3; ++d) out.u[d][c] = v[d];
      }
  return out;
}

void DiscreteVectorField::validate() const {
  grid.validate();
  for (const auto& a : u)
    if (a.size() != grid.size()) throw PreconditionError("DiscreteVectorField: component size does not match grid");
  double scale = 1.0;
  for (const auto& a : u)
    for (double v : a) {
      if (!std::isfinite(v)) throw PreconditionError("DiscreteVectorField: nonfinite value");
      scale = std::max(scale, std::abs(v));
    }
  const double tol = 1e-12 * scale;
  for (int d = 0; d < 3; ++d) {
    if (!normal_zero[d]) continue;
    const int n = grid.count(d);
    for (int i = 0; i < grid.n1; ++i)
      for (int j = 0; j < grid.n2; ++j)
        for (int k = 0; k < grid.n3; ++k) {
          const int m = d == 0 ? i : d == 1 ? j : k;
          if (m != 0 && m != n - 1) continue;
          if (std::abs(u[d][grid.index(i, j, k)]) > tol)
            throw PreconditionError("DiscreteVectorField: normal component u" + std::to_string(d + 1) +
                                    " does not vanish on its boundary faces");
        }
  }
}

std::vector<Mat3> discrete_gradient(const DiscreteVectorField& field) {
  const NodeGrid& g = field.grid;
  g.validate();
  for (const auto& a : field.u)
    if (a.size() != g.size()) throw PreconditionError("discrete_gradient: component size does not match grid");
  std::vector<Mat3> out(g.size());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        Mat3& G = out[g.index(i, j, k)];
        for (int comp = 0; comp < 3; ++comp) {
          const Vec3 row = scalar_gradient(g, field.u[comp], i, j, k);
          G[comp] = row;
        }
      }
  return out;
}

KornReport korn_report(const DiscreteVectorField& field) {
  field.validate();
  const NodeGrid& g = field.grid;
  const auto grad = discrete_gradient(field);
  KornReport r;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const double w = g.weight(i, j, k);
        const Mat3& G = grad[g.index(i, j, k)];
        const double div = trace(G);
        double gs = 0.0, ss = 0.0, ds = 0.0, mx = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const double sym = G[a][b] + G[b][a];
            const double dev = sym - (a == b ? (2.0 / 3.0) * div : 0.0);
            gs += G[a][b] * G[a][b];
            ss += sym * sym;
            ds += dev * dev;
            mx += dev * G[a][b];
          }
        r.grad_sq += w * gs;
        r.sym_sq += w * ss;
        r.dev_sq += w * ds;
        r.mixed += w * mx;
        r.div_sq += w * div * div;
      }
  const double hm = g.h_max();
  r.tolerance = 10.0 * hm * hm * (1.0 + r.grad_sq);
  r.sym_holds = r.grad_sq <= r.sym_sq + r.tolerance;
  r.dev_holds = r.grad_sq <= r.dev_sq + r.tolerance;
  r.mixed_holds = r.grad_sq <= r.mixed + r.tolerance;
  return r;
}

DiscreteVectorField random_compliant_field(const NodeGrid& g, std::uint64_t seed, int band) {
  g.validate();
  if (band < 1) throw PreconditionError("random_compliant_field: band must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // sin_tab[d][k][m] = sin(k pi s_m), cos_tab likewise, s_m = m / (n_d - 1).
  std::array<std::vector<std::vector<double>>, 3> sin_tab, cos_tab;
  for (int d = 0; d < 3; ++d) {
    const int n = g.count(d);
    sin_tab[d].assign(band + 1, std::vector<double>(n));
    cos_tab[d].assign(band + 1, std::vector<double>(n));
    for (int k = 0; k <= band; ++k)
      for (int m = 0; m < n; ++m) {
        const double s = static_cast<double>(m) / (n - 1);
        sin_tab[d][k][m] = (m == 0 || m == n - 1) ? 0.0 : std::sin(k * kPi * s);
        cos_tab[d][k][m] = std::cos(k * kPi * s);
      }
  }

  DiscreteVectorField out;
  out.grid = g;
  for (auto& a : out.u) a.assign(g.size(), 0.0);
  for (int comp = 0; comp < 3; ++comp) {
    for (int k0 = 0; k0 <= band; ++k0)
      for (int k1 = 0; k1 <= band; ++k1)
        for (int k2 = 0; k2 <= band; ++k2) {
          const int ks[3] = {k0, k1, k2};
          if (ks[comp] == 0) continue;
          const double a = normal(rng);
          const auto& t0 = comp == 0 ? sin_tab[0][k0] : cos_tab[0][k0];
          const auto& t1 = comp == 1 ? sin_tab[1][k1] : cos_tab[1][k1];
          const auto& t2 = comp == 2 ? sin_tab[2][k2] : cos_tab[2][k2];
          for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
              const double aij = a * t0[i] * t1[j];
              double* dst = out.u[comp].data() + g.index(i, j, 0);
              for (int k = 0; k < g.n3; ++k) dst[k] += aij * t2[k];
            }
        }
  }
  return out;
}

DiscreteScalarField DiscreteScalarField::sample(const NodeGrid& g,
                                                const std::function<double(double, double, double)>& f) {
  g.validate();
  DiscreteScalarField out;
  out.grid = g;
  out.f.resize(g.size());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) out.f[g.index(i, j, k)] = f(g.x(0, i), g.x(1, j), g.x(2, k));
  return out;
}

PoincareReport poincare_ladyzhenskaya_check(const DiscreteScalarField& field, double epsilon) {
  const NodeGrid& g = field.grid;
  g.validate();
  if (field.f.size() != g.size()) throw PreconditionError("poincare_ladyzhenskaya_check: size does not match grid");
  double scale = 1.0;
  for (double v : field.f) {
    if (!std::isfinite(v)) throw PreconditionError("poincare_ladyzhenskaya_check: nonfinite value");
    scale = std::max(scale, std::abs(v));
  }
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      if (std::abs(field.f[g.index(i, j, 0)]) > 1e-12 * scale ||
          std::abs(field.f[g.index(i, j, g.n3 - 1)]) > 1e-12 * scale)
        throw PreconditionError("poincare_ladyzhenskaya_check: f must vanish at y = 0 and y = 1");

  std::vector<double> avg(g.n3, 0.0);
  double area = 0.0;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      const double w = trapezoid_1d(i, g.n1) * trapezoid_1d(j, g.n2);
      area += w;
      for (int k = 0; k < g.n3; ++k) avg[k] += w * field.f[g.index(i, j, k)];
    }
  for (double& a : avg) a /= area;

  PoincareReport r;
  r.epsilon = epsilon;
  double grad_l2 = 0.0;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      for (int k = 0; k < g.n3; ++k) {
        const double w = g.weight(i, j, k);
        const double dev = field.f[g.index(i, j, k)] - avg[k];
        r.numerator += w * dev * dev * dev * dev;
        const Vec3 gf = scalar_gradient(g, field.f, i, j, k);
        grad_l2 += w * dot(gf, gf);
      }
  r.denominator = grad_l2 * grad_l2;
  r.ratio = r.denominator > 0.0 ? r.numerator / r.denominator : 0.0;
  return r;
}

DiscreteScalarField poincare_family(int family, double epsilon, int n_transverse, int n_axial) {
  if (!(epsilon > 0.0)) throw PreconditionError("poincare_family: epsilon must be positive");
  const NodeGrid g =
      NodeGrid::box(n_transverse, n_transverse, n_axial, {epsilon, epsilon, 1.0}, {-0.5 * epsilon, -0.5 * epsilon, 0.0});
  auto vanish = [](double y) { return (y <= 0.0 || y >= 1.0) ? 0.0 : std::sin(kPi * y); };
  switch (family) {
    case 0:
      return DiscreteScalarField::sample(g, [&](double x1, double, double y) { return vanish(y) * x1; });
    case 1:
      return DiscreteScalarField::sample(
          g, [&](double x1, double, double y) { return vanish(y) * std::cos(kPi * x1 / epsilon); });
    default:
      throw PreconditionError("poincare_family: unknown family " + std::to_string(family));
  }
}

}  // namespace nsf
