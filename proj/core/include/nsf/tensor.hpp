#pragma once

#include <array>
#include <cmath>

namespace nsf {

using Vec3 = std::array<double, 3>;
/// Row-major 3x3 tensor; for a velocity gradient G[j][k] = d u_j / d x_k.
using Mat3 = std::array<Vec3, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double trace(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

/// Frobenius product A:B.
inline double contract(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) s += a[j][k] * b[j][k];
  return s;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 t{};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) t[j][k] = m[k][j];
  return t;
}

inline bool all_finite(const Mat3& m) {
  for (const auto& row : m)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

}  // namespace nsf
