#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "nsf/tensor.hpp"

namespace nsf {

/// Node-based uniform grid on the box (x1_0, x1_0 + L1) x (x2_0, x2_0 + L2) x (0, L3)
/// with n_i >= 2 nodes per axis, boundary nodes included. Storage is
/// k-fastest: index(i, j, k) = (i n2 + j) n3 + k.
struct NodeGrid {
  int n1 = 0, n2 = 0, n3 = 0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> length{1.0, 1.0, 1.0};

  static NodeGrid box(int n1, int n2, int n3, std::array<double, 3> length = {1.0, 1.0, 1.0},
                      std::array<double, 3> origin = {0.0, 0.0, 0.0});

  std::size_t size() const noexcept { return static_cast<std::size_t>(n1) * n2 * n3; }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * n2 + j) * n3 + k;
  }
  int count(int axis) const noexcept { return axis == 0 ? n1 : axis == 1 ? n2 : n3; }
  double h(int axis) const noexcept { return length[axis] / (count(axis) - 1); }
  double x(int axis, int m) const noexcept { return origin[axis] + m * h(axis); }
  double h_max() const noexcept;
  /// Trapezoid weight of node (i, j, k).
  double weight(int i, int j, int k) const noexcept;
  /// Throws PreconditionError unless every axis has at least 2 nodes and positive length.
  void validate() const;
};

/// Velocity samples on a NodeGrid. normal_zero[d] requests u_d = 0 on the two
/// faces normal to axis d.
struct DiscreteVectorField {
  NodeGrid grid;
  std::array<std::vector<double>, 3> u;
  std::array<bool, 3> normal_zero{true, true, true};

  static DiscreteVectorField sample(const NodeGrid& grid, const std::function<Vec3(double, double, double)>& f,
                                    std::array<bool, 3> normal_zero = {true, true, true});

  /// Throws PreconditionError on size mismatch or when a requested normal
  /// component exceeds 1e-12 (relative to max(1, max |u|)) on its faces.
  void validate() const;
};

/// Per-node gradient G[j][d] = d u_j / d x_d: second-order central in the
/// interior, second-order one-sided on boundary nodes (first order when an
/// axis has only two nodes). Exact for affine fields.
std::vector<Mat3> discrete_gradient(const DiscreteVectorField& field);

/// Quadratic forms of the Korn-type inequalities, trapezoid quadrature.
struct KornReport {
  double grad_sq = 0.0;  ///< ||grad u||^2
  double sym_sq = 0.0;  ///< ||grad u + grad u^T||^2
  double dev_sq = 0.0;  ///< ||grad u + grad u^T - 2/3 div u I||^2
  double mixed = 0.0;  ///< int (grad u + grad u^T - 2/3 div u I) : grad u
  double div_sq = 0.0;  ///< ||div u||^2
  double tolerance = 0.0;  ///< 10 h_max^2 (1 + grad_sq)
  bool sym_holds = false, dev_holds = false, mixed_holds = false;

  bool all_hold() const noexcept { return sym_holds && dev_holds && mixed_holds; }
};

/// Validates the field, then evaluates the report.
KornReport korn_report(const DiscreteVectorField& field);

/// Band-limited random field satisfying u.n = 0 on every face:
/// u_d = sum a sin(k_d pi s_d) cos(k_t pi s_t) cos(k_r pi s_r), s the normalised
/// coordinates, 1 <= k_d <= band, 0 <= k_t, k_r <= band, a standard normal.
DiscreteVectorField random_compliant_field(const NodeGrid& grid, std::uint64_t seed, int band = 2);

/// Scalar samples on a NodeGrid, used for the Poincare-Ladyzhenskaya check.
struct DiscreteScalarField {
  NodeGrid grid;
  std::vector<double> f;

  static DiscreteScalarField sample(const NodeGrid& grid, const std::function<double(double, double, double)>& f);
};

struct PoincareReport {
  double epsilon = 0.0;
  double numerator = 0.0;  ///< ||f - (f)_Q||^4_{L^4}
  double denominator = 0.0;  ///< ||grad f||^4_{L^2}
  double ratio = 0.0;  ///< numerator / denominator, 0 when both vanish
};

/// Throws PreconditionError unless f vanishes (within 1e-12 relative) on the
/// faces x3 = 0 and x3 = L3.
PoincareReport poincare_ladyzhenskaya_check(const DiscreteScalarField& field, double epsilon);

/// Test family on Omega_eps = eps (0,1)^2 x (0,1) with centred transverse
/// coordinates: family 0 is f = sin(pi y) x1, family 1 is
/// f = sin(pi y) cos(pi xi1) with xi1 = x1 / eps.
DiscreteScalarField poincare_family(int family, double epsilon, int n_transverse, int n_axial);

}  // namespace nsf
