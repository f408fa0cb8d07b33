#pragma once

#include <algorithm>
#include <cmath>

namespace nsf::detail {

// Wall closures shared by the 1D and 3D schemes. Index 0 is the cell touching
// the wall, index 1 its inner neighbour; h is the spacing normal to the wall.

/// Pressure extrapolated linearly to the wall.
inline double wall_pressure(double p0, double p1) { return 1.5 * p0 - 0.5 * p1; }

/// Temperature at an insulated wall from the even quadratic through two cells.
inline double wall_temperature(double t0, double t1) { return std::max((9.0 * t0 - t1) / 8.0, 0.5 * t0); }

/// Inward normal derivative of a component that vanishes on the wall.
inline double wall_normal_derivative(double v0, double v1, double h) { return (3.0 * v0 - v1 / 3.0) / h; }

/// Derivative at the centre of the wall cell of a component vanishing on the wall.
inline double odd_cell_derivative(double v0, double v1, double h) { return v0 / h + v1 / (3.0 * h); }

/// Derivative at the centre of the wall cell of a component with zero normal
/// derivative on the wall.
inline double even_cell_derivative(double v0, double v1, double h) { return (v1 - v0) / (2.0 * h); }

/// Cube root of rho refined from c0, the cube root of a nearby density, by two
/// Halley steps; std::cbrt when rho differs from c0^3 by more than 0.1%.
inline double cbrt_near(double rho, double c0) {
  const double r0 = c0 * c0 * c0;
  if (!(std::abs(rho - r0) <= 1e-3 * r0)) return std::cbrt(rho);
  double c = c0;
  for (int k = 0; k < 2; ++k) {
    const double c3 = c * c * c;
    c *= (c3 + 2.0 * rho) / (2.0 * c3 + rho);
  }
  return c;
}

}  // namespace nsf::detail
