#pragma once

#include <filesystem>
#include <span>

#include "nsf/solver1d.hpp"
#include "nsf/solver3d.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// CSV with header y,rho,u,theta; one row per cell.
void write_state1d_csv(const std::filesystem::path& path, const State1D& state);

/// CSV with header t,mass,energy,entropy_production_min.
void write_diagnostics1d_csv(const std::filesystem::path& path, std::span<const BalanceDiagnostics1D> rows);

/// CSV with header i,j,k,x1,x2,y,rho,u1,u2,u3,theta in storage order.
void write_state3d_csv(const std::filesystem::path& path, const State3D& state);

/// CSV with header t,mass,energy,entropy,production,sigma_integral,sigma_min.
void write_balance3d_csv(const std::filesystem::path& path, std::span<const Balance3D> rows);

/// Binary snapshot, all integers and reals little-endian:
///   "NSF3" | u32 version (1) | u32 n1, n2, n3 | f64 epsilon, t, a, b, c, d |
///   f64 rho[N] | u1[N] | u2[N] | u3[N] | theta[N]
/// with N = n1 n2 n3 and each field in Grid3D storage order (k fastest).
void write_state3d_binary(const std::filesystem::path& path, const State3D& state);

/// Inverse of write_state3d_binary; throws std::runtime_error on a bad magic,
/// unsupported version or truncated file.
State3D read_state3d_binary(const std::filesystem::path& path);

}  // namespace nsf
