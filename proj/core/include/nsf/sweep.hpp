#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/relent.hpp"
#include "nsf/solver3d.hpp"
#include "nsf/state.hpp"

namespace nsf {

enum class Verdict { kPass, kFail, kUndetermined };

std::string_view to_string(Verdict v) noexcept;

/// Scaled distances of one epsilon case at one output time. `u_norm[i]` is the
/// instantaneous velocity distance for exponent `r[i]`.
struct SweepRow {
  double epsilon = 0.0;
  double time = 0.0;
  double rho_norm = 0.0;
  double theta_norm = 0.0;
  std::vector<double> r;
  std::vector<double> u_norm;
  double rel_entropy = 0.0;
};

struct VerdictThresholds {
  double slack = 0.05;  ///< v(eps_{k+1}) <= (1 + slack) v(eps_k) + floor
  double total_ratio = 0.25;  ///< v(eps_min) <= total_ratio v(eps_max)
  double floor = 1e-12;  ///< values at or below this count as zero
};

/// Trend of one metric's sup-in-time value across epsilon, largest epsilon first.
struct MetricVerdict {
  std::string metric;
  std::vector<double> epsilons;
  std::vector<double> sup_values;
  Verdict verdict = Verdict::kUndetermined;
  std::string reason;
};

struct VerdictSummary {
  Verdict overall = Verdict::kUndetermined;
  std::vector<MetricVerdict> metrics;
};

/// Pure function of the rows: groups by epsilon, takes the maximum over time of
/// every metric and tests monotone decay in epsilon. Fewer than two distinct
/// epsilons give kUndetermined. Throws PreconditionError if the rows disagree
/// on their r exponents.
VerdictSummary evaluate_verdict(std::span<const SweepRow> rows, const VerdictThresholds& thresholds = {});

/// Results of one epsilon case.
struct EpsilonRun {
  double epsilon = 0.0;
  Grid3D grid;
  ScaledNormReport norms;
  std::vector<SweepRow> rows;
  std::vector<Balance3D> balance;  ///< at every output time
  std::vector<int> snapshot_outputs;  ///< output indices of the stored snapshots
  std::vector<State3D> snapshots;
  std::vector<State1D> reference_snapshots;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  std::string error;  ///< empty unless the case aborted; rows up to the failure are kept
};

struct SweepReport {
  SweepConfig config;
  std::vector<EpsilonRun> runs;  ///< ordered by decreasing epsilon
  std::vector<SweepRow> rows;  ///< merged rows of all runs, same order
  VerdictSummary verdict;
  std::string started_at, finished_at;  ///< UTC, ISO 8601
  int jobs = 1;
  std::string error;  ///< first case error, if any

  bool failed() const noexcept { return !error.empty(); }
};

struct SweepOptions {
  int jobs = 1;
  std::function<void(const std::string&)> log;  ///< progress messages; may be called from worker threads
};

/// Worker count: min(requested, NSF_THREADS if set and positive, cases), at least 1.
int effective_jobs(int requested, std::size_t cases);

/// Runs every epsilon case from lifted 1D data. Each case advances a 3D solver
/// and a 1D reference in lockstep, sampling scaled norms at config.outputs
/// evenly spaced times. Cases run concurrently on independent state; results
/// are merged in epsilon order, so output does not depend on the job count.
/// Solver failures are recorded in the report instead of thrown.
SweepReport run_sweep(const SweepConfig& config, const SweepOptions& options = {});

inline constexpr std::string_view kSchemeVersion = "fv-central-heun/1";

}  // namespace nsf
