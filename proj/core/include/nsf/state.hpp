#pragma once

#include <cstddef>
#include <vector>

#include "nsf/thermo.hpp"

namespace nsf {

/// Cell-centred samples of (rho, u, theta) on (0,1) with n uniform cells of
/// width h; cell i is centred at (i + 1/2) h. Walls sit on the outer faces.
struct State1D {
  int n = 0;
  double h = 0.0;
  double t = 0.0;
  std::vector<double> rho, u, theta;

  double y(int i) const noexcept { return (i + 0.5) * h; }

  std::vector<double> momentum() const;
  /// Total energy density 1/2 rho u^2 + rho e.
  std::vector<double> total_energy(const ThermoModel& model) const;
  /// Throws PreconditionError unless sizes match n and rho, theta > 0.
  void validate() const;
};

/// Reference cross-section Q = (a,b) x (c,d).
struct CrossSection {
  double a = 0.0, b = 1.0, c = 0.0, d = 1.0;
  double area() const noexcept { return (b - a) * (d - c); }
};

/// Cell counts of a 3D run; transverse counts are fixed in scaled coordinates.
struct GridPolicy {
  int n1 = 16, n2 = 16, n3 = 64;
};

/// Uniform cell-centred grid on Omega_eps = eps Q x (0,1). Storage is
/// k-fastest: index(i, j, k) = (i n2 + j) n3 + k, with k the axial index.
struct Grid3D {
  int n1 = 0, n2 = 0, n3 = 0;
  double epsilon = 1.0;
  CrossSection q;
  double h1 = 0.0, h2 = 0.0, h3 = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(n1) * n2 * n3; }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * n2 + j) * n3 + k;
  }
  double x1(int i) const noexcept { return epsilon * q.a + (i + 0.5) * h1; }
  double x2(int j) const noexcept { return epsilon * q.c + (j + 0.5) * h2; }
  double y(int k) const noexcept { return (k + 0.5) * h3; }
  /// Cross-section coordinates rescaled back to Q.
  double xi1(int i) const noexcept { return q.a + (i + 0.5) * (q.b - q.a) / n1; }
  double xi2(int j) const noexcept { return q.c + (j + 0.5) * (q.d - q.c) / n2; }
  /// |Q_eps| = eps^2 |Q|.
  double cross_section_measure() const noexcept { return epsilon * epsilon * q.area(); }
  double cell_volume() const noexcept { return h1 * h2 * h3; }
};

/// Builds the grid for Omega_eps. Throws PreconditionError on eps <= 0, a
/// degenerate rectangle or fewer than 2 x 2 x 4 cells.
Grid3D build_domain(const CrossSection& q, double epsilon, const GridPolicy& policy);

/// Samples of (rho, u1, u2, u3, theta) on a Grid3D.
struct State3D {
  Grid3D grid;
  double t = 0.0;
  std::vector<double> rho, u1, u2, u3, theta;

  State3D() = default;
  explicit State3D(const Grid3D& g)
      : grid(g), rho(g.size()), u1(g.size()), u2(g.size()), u3(g.size()), theta(g.size()) {}

  void validate() const;
};

}  // namespace nsf
