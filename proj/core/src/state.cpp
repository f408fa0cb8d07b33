#include "nsf/state.hpp"

#include <cmath>
#include <string>

namespace nsf {

std::vector<double> State1D::momentum() const {
  std::vector<double> m(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) m[i] = rho[i] * u[i];
  return m;
}

std::vector<double> State1D::total_energy(const ThermoModel& model) const {
  std::vector<double> e(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    e[i] = 0.5 * rho[i] * u[i] * u[i] + rho[i] * model.internal_energy(rho[i], theta[i]);
  return e;
}

void State1D::validate() const {
  const auto n_sz = static_cast<std::size_t>(n);
  if (n < 2 || !(h > 0.0)) throw PreconditionError("State1D: need n >= 2 cells and h > 0");
  if (rho.size() != n_sz || u.size() != n_sz || theta.size() != n_sz)
    throw PreconditionError("State1D: array sizes do not match n");
  for (int i = 0; i < n; ++i) {
    if (!(rho[i] > 0.0) || !(theta[i] > 0.0) || !std::isfinite(u[i]) || !std::isfinite(rho[i]) ||
        !std::isfinite(theta[i]))
      throw PreconditionError("State1D: nonpositive or nonfinite value in cell " + std::to_string(i));
  }
}

Grid3D build_domain(const CrossSection& q, double epsilon, const GridPolicy& policy) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw PreconditionError("build_domain: epsilon must be positive");
  if (!(q.b > q.a) || !(q.d > q.c)) throw PreconditionError("build_domain: degenerate cross-section rectangle");
  if (policy.n1 < 2 || policy.n2 < 2 || policy.n3 < 4) throw PreconditionError("build_domain: need at least 2 x 2 x 4 cells");
  Grid3D g;
  g.n1 = policy.n1;
  g.n2 = policy.n2;
  g.n3 = policy.n3;
  g.epsilon = epsilon;
  g.q = q;
  g.h1 = epsilon * (q.b - q.a) / policy.n1;
  g.h2 = epsilon * (q.d - q.c) / policy.n2;
  g.h3 = 1.0 / policy.n3;
  return g;
}

void State3D::validate() const {
  const std::size_t n = grid.size();
  if (n == 0) throw PreconditionError("State3D: empty grid");
  if (rho.size() != n || u1.size() != n || u2.size() != n || u3.size() != n || theta.size() != n)
    throw PreconditionError("State3D: array sizes do not match the grid");
  for (std::size_t c = 0; c < n; ++c) {
    if (!(rho[c] > 0.0) || !(theta[c] > 0.0) || !std::isfinite(rho[c]) || !std::isfinite(theta[c]) ||
        !std::isfinite(u1[c]) || !std::isfinite(u2[c]) || !std::isfinite(u3[c]))
      throw PreconditionError("State3D: nonpositive or nonfinite value at cell " + std::to_string(c));
  }
}

}  // namespace nsf
