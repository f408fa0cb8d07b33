#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nsf/solver1d.hpp"
#include "nsf/solver3d.hpp"
#include "nsf/state.hpp"
#include "nsf/thermo.hpp"

namespace nsf {

/// Snapshot encoding used for 3D fields in run directories.
enum class SnapshotFormat { kBinary, kCsv };

/// Complete description of an epsilon sweep. Every field has a default, so an
/// empty document is a valid configuration.
///
/// YAML layout; every section is optional:
///
///   thermo:        a, mu0, mu1, eta0, eta1, kappa0, kappa2, kappa3, S0,
///                  P_closure (power_sum | saturating), P_linear, P_inf
///   profile:       rho_base, rho_amp, rho_mode, rho_shape (sin | cos),
///                  the same four keys for u_ and theta_
///   perturbation:  delta, alpha, mode1, mode2
///   sweep:         epsilons [list], r [list], n1, n2, n3, T_final, outputs,
///                  cfl, seed, cross_section [a, b, c, d]
///   output:        dir, snapshot_stride, snapshot_format (binary | csv)
struct SweepConfig {
  ThermoCoefficients thermo;
  std::string closure = "power_sum";
  double p_linear = 1.0;
  double p_inf = 1.0;

  ModeTerm rho{1.0, 0.2, 1, false};
  ModeTerm u{0.0, 0.2, 1, true};
  ModeTerm theta{1.0, 0.2, 1, false};

  PerturbationSpec perturbation;

  std::vector<double> epsilons{0.5, 0.25, 0.125};
  std::vector<double> r{1.0, 1.5};
  GridPolicy grid;
  CrossSection cross_section;
  double t_final = 0.25;
  int outputs = 50;
  double cfl = 0.4;
  std::uint64_t seed = 0;

  std::string out_dir;
  int snapshot_stride = 10;  ///< write every k-th output; 0 disables snapshots
  SnapshotFormat snapshot_format = SnapshotFormat::kBinary;

  ThermoModel model() const;
  ProfileSpec profile() const;
};

/// Parses and validates YAML text. Throws ConfigError carrying the offending
/// line for syntax errors, unknown sections or keys, malformed values and
/// invariant violations.
SweepConfig parse_config(std::string_view text);

/// Reads and parses a file; an unreadable file is a ConfigError with line 0.
SweepConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const SweepConfig& config);

}  // namespace nsf
