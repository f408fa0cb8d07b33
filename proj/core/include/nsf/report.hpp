#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsf/sweep.hpp"

namespace nsf {

/// Column names of sweep.csv for the given velocity exponents:
/// epsilon, time, rho_norm, theta_norm, u_norm_r<r>..., E_scaled.
std::vector<std::string> sweep_csv_header(const std::vector<double>& r);

/// Writes into `dir` (created if missing):
///   sweep.csv      one row per (epsilon, output time), full precision
///   verdict.txt    overall verdict and one line per metric
///   metadata.json  timestamps, grid, scheme version, output cadence, config
///   eps_<k>/       per case: balance.csv, reference_<n>.csv and
///                  snapshot_<n>.nsf3 (or .csv) at the stored outputs
/// An existing sweep.csv is first renamed to sweep.csv.bak. Failures throw
/// std::runtime_error naming the path.
void emit_report(const SweepReport& report, const std::filesystem::path& dir);

}  // namespace nsf
