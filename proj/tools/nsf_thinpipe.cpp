// nsf-thinpipe: command line front end for thin-pipe flow runs and checks.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/field_io.hpp"
#include "nsf/inequalities.hpp"
#include "nsf/relent.hpp"
#include "nsf/report.hpp"
#include "nsf/solver1d.hpp"
#include "nsf/solver3d.hpp"
#include "nsf/sweep.hpp"
#include "nsf/thermo.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

nsf::SweepConfig config_or_default(const std::string& path) {
  return path.empty() ? nsf::parse_config("") : nsf::load_config(path);
}

fs::path resolve_out(const std::string& flag, const nsf::SweepConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.out_dir.empty()) return config.out_dir;
  throw std::runtime_error("no output directory: pass --out or set output.dir");
}

std::string tag(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return buf;
}

int verdict_exit(nsf::Verdict v, bool allow_undetermined) {
  switch (v) {
    case nsf::Verdict::kPass: return kExitPass;
    case nsf::Verdict::kUndetermined: return allow_undetermined ? kExitPass : kExitFail;
    case nsf::Verdict::kFail: return kExitFail;
  }
  return kExitFail;
}

struct SweepArgs {
  std::string config, out;
  int jobs = 1;
  bool allow_undetermined = false;
  bool quiet = false;
};

int cmd_sweep(const SweepArgs& a) {
  const nsf::SweepConfig config = nsf::load_config(a.config);
  const fs::path out = resolve_out(a.out, config);
  nsf::SweepOptions options;
  options.jobs = a.jobs;
  if (!a.quiet) options.log = [](const std::string& msg) { std::cerr << msg << "\n"; };
  const nsf::SweepReport report = nsf::run_sweep(config, options);
  nsf::emit_report(report, out);
  for (const auto& m : report.verdict.metrics)
    std::cout << m.metric << ": " << nsf::to_string(m.verdict) << " " << m.reason << "\n";
  std::cout << "verdict: " << nsf::to_string(report.verdict.overall) << "\n";
  if (report.failed()) {
    std::cerr << "error: " << report.error << " (partial report in " << out.string() << ")\n";
    return kExitError;
  }
  return verdict_exit(report.verdict.overall, a.allow_undetermined);
}

struct SolveArgs {
  std::string config, out;
  int cells = 0;
  double epsilon = 0.0;
  bool allow_undetermined = false;
};

int cmd_solve1d(const SolveArgs& a) {
  const nsf::SweepConfig config = config_or_default(a.config);
  const fs::path out = resolve_out(a.out, config);
  fs::create_directories(out);
  const nsf::ThermoModel model = config.model();
  const int n = a.cells > 0 ? a.cells : config.grid.n3;
  const nsf::State1D initial = nsf::init_smooth(config.profile(), n);
  nsf::IntegrateOptions opts;
  opts.outputs = config.outputs;
  opts.cfl = config.cfl;
  const nsf::Trajectory1D traj = nsf::integrate(model, initial, config.t_final, opts);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k)
    if (config.snapshot_stride > 0 &&
        (k % static_cast<std::size_t>(config.snapshot_stride) == 0 || k + 1 == traj.snapshots.size()))
      nsf::write_state1d_csv(out / ("snapshot_" + tag(static_cast<int>(k)) + ".csv"), traj.snapshots[k]);
  nsf::write_diagnostics1d_csv(out / "diagnostics.csv", traj.diagnostics);

  const auto& d0 = traj.diagnostics.front();
  double mass_drift = 0.0, energy_drift = 0.0, prod_min = d0.entropy_production_min;
  for (const auto& d : traj.diagnostics) {
    mass_drift = std::max(mass_drift, std::abs(d.mass - d0.mass) / std::abs(d0.mass));
    energy_drift = std::max(energy_drift, std::abs(d.energy - d0.energy) / std::abs(d0.energy));
    prod_min = std::min(prod_min, d.entropy_production_min);
  }
  const bool pass = mass_drift <= 1e-12 && energy_drift <= 1e-10 && prod_min >= -1e-10;
  std::cout << "cells: " << n << "\nmass drift: " << mass_drift << "\nenergy drift: " << energy_drift
            << "\nmin entropy production: " << prod_min << "\nverdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_solve3d(const SolveArgs& a) {
  const nsf::SweepConfig config = config_or_default(a.config);
  const fs::path out = resolve_out(a.out, config);
  fs::create_directories(out);
  const nsf::ThermoModel model = config.model();
  const double eps = a.epsilon > 0.0 ? a.epsilon : config.epsilons.front();
  const nsf::Grid3D grid = nsf::build_domain(config.cross_section, eps, config.grid);
  const nsf::State1D ref = nsf::init_smooth(config.profile(), config.grid.n3);
  const nsf::State3D initial = nsf::lift_initial_data(ref, config.perturbation, grid);
  nsf::Integrate3DOptions opts;
  opts.outputs = config.outputs;
  opts.cfl = config.cfl;
  const nsf::Trajectory3D traj = nsf::integrate3d(model, initial, config.t_final, opts);

  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (config.snapshot_stride <= 0) break;
    if (k % static_cast<std::size_t>(config.snapshot_stride) != 0 && k + 1 != traj.snapshots.size()) continue;
    const std::string name = "snapshot_" + tag(static_cast<int>(k));
    if (config.snapshot_format == nsf::SnapshotFormat::kBinary)
      nsf::write_state3d_binary(out / (name + ".nsf3"), traj.snapshots[k]);
    else
      nsf::write_state3d_csv(out / (name + ".csv"), traj.snapshots[k]);
  }
  nsf::write_balance3d_csv(out / "balance.csv", traj.balance);

  const auto ledger = nsf::dissipation_ledger(traj, config.theta.base);
  {
    std::ofstream f(out / "ledger.csv");
    f.precision(17);
    f << "t,energy_term,production,total,initial_total\n";
    for (const auto& l : ledger)
      f << l.t << "," << l.energy_term << "," << l.production << "," << l.total << "," << l.initial_total << "\n";
    if (!f) throw std::runtime_error("write failed for " + (out / "ledger.csv").string());
  }
  const auto& b0 = traj.balance.front();
  const auto& b1 = traj.balance.back();
  const double mass_drift = std::abs(b1.mass - b0.mass) / std::abs(b0.mass);
  const double energy_drift = std::abs(b1.energy - b0.energy) / std::abs(b0.energy);
  const double imbalance = nsf::ledger_imbalance(ledger);
  const bool pass = mass_drift <= 1e-12 && energy_drift <= 1e-10 && imbalance <= 1e-8 && b1.sigma_min >= -1e-12;
  std::cout << "epsilon: " << eps << "\nmass drift: " << mass_drift << "\nenergy drift: " << energy_drift
            << "\nledger imbalance: " << imbalance << "\nmin sigma: " << b1.sigma_min
            << "\nverdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

struct InequalityArgs {
  std::string out;
  int n = 32;
  int fields = 50;
  std::uint64_t seed = 1;
};

int cmd_check_inequalities(const InequalityArgs& a) {
  const nsf::NodeGrid grid = nsf::NodeGrid::box(a.n, a.n, a.n);
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot open " + a.out + " for writing");
  }
  std::ostream& csv = a.out.empty() ? std::cout : file;
  csv.precision(12);
  csv << "field_id,grad_sq,sym_sq,dev_sq,mixed,sym_pass,dev_pass,mixed_pass\n";
  bool all = true;
  for (int f = 0; f < a.fields; ++f) {
    const auto r = nsf::korn_report(nsf::random_compliant_field(grid, a.seed + f));
    all = all && r.all_hold();
    csv << f << "," << r.grad_sq << "," << r.sym_sq << "," << r.dev_sq << "," << r.mixed << "," << r.sym_holds << ","
        << r.dev_holds << "," << r.mixed_holds << "\n";
  }
  if (!a.out.empty()) file.close();

  const double pi = std::numbers::pi;
  const auto axial = nsf::korn_report(nsf::DiscreteVectorField::sample(
      grid, [pi](double, double, double x3) { return nsf::Vec3{0.0, 0.0, std::sin(pi * x3)}; }));
  std::ostream& log = a.out.empty() ? std::cerr : std::cout;
  log << "sin(pi x3): grad_sq=" << axial.grad_sq << " (pi^2/2=" << pi * pi / 2 << ") dev_sq=" << axial.dev_sq
      << " (4pi^2/3=" << 4 * pi * pi / 3 << ")\n";

  bool poincare_ok = true;
  for (int family = 0; family < 2; ++family) {
    double base = 0.0;
    log << "poincare family " << family << ":";
    for (double eps : {1.0, 0.5, 0.25, 0.125}) {
      const auto r = nsf::poincare_ladyzhenskaya_check(nsf::poincare_family(family, eps, 17, 33), eps);
      if (eps == 1.0) base = r.ratio;
      poincare_ok = poincare_ok && r.ratio <= 1.1 * base;
      log << " eps=" << eps << " ratio=" << r.ratio;
    }
    log << "\n";
  }
  const bool pass = all && poincare_ok;
  log << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_check_thermo(const std::string& config_path) {
  const nsf::SweepConfig config = config_or_default(config_path);
  const nsf::ThermoModel model = config.model();
  const nsf::ThermoSelfCheck t = nsf::run_thermo_self_check(model);
  std::cout << "closure: " << model.closure().name() << "\nmax gibbs residual: " << t.max_gibbs_residual
            << "\nmin dp/drho: " << t.min_dp_drho << "\nmin de/dtheta: " << t.min_de_dtheta
            << "\ndegeneracy range: [" << t.min_degeneracy << ", " << t.max_degeneracy << "]"
            << "\nP(Z)/Z^(5/3) decreasing: " << (t.p_over_z53_decreasing ? "yes" : "no")
            << "\nP(Z)/Z^(5/3) at largest Z: " << t.p_over_z53_at_max << "\nmax S'(Z): " << t.max_dS << "\n";
  const nsf::CoercivityReport c = nsf::coercivity_check(model, nsf::EssentialWindow{});
  std::cout << "coercivity constants: essential=" << c.c_essential << " residual=" << c.c_residual
            << " below=" << c.c_below << " above=" << c.c_above << "\nmin relative entropy: " << c.min_rel_entropy
            << "\n";
  const bool pass = t.passed && c.all_positive();
  std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin-pipe compressible heat-conducting flow: solvers, checks and epsilon sweeps"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run an epsilon sweep and write a convergence report");
  s->add_option("--config", sweep.config, "YAML configuration file")->required()->check(CLI::ExistingFile);
  s->add_option("--out", sweep.out, "Output directory (defaults to output.dir)");
  s->add_option("--jobs", sweep.jobs, "Concurrent epsilon cases (capped by NSF_THREADS)")->check(CLI::PositiveNumber);
  s->add_flag("--allow-undetermined", sweep.allow_undetermined, "Exit 0 when the verdict is UNDETERMINED");
  s->add_flag("--quiet", sweep.quiet, "Suppress progress messages");

  SolveArgs solve1d;
  auto* s1 = app.add_subcommand("solve1d", "Integrate the one-dimensional limit problem");
  s1->add_option("--config", solve1d.config, "YAML configuration file")->check(CLI::ExistingFile);
  s1->add_option("--out", solve1d.out, "Output directory");
  s1->add_option("--cells", solve1d.cells, "Cell count (defaults to sweep.n3)")->check(CLI::PositiveNumber);

  SolveArgs solve3d;
  auto* s3 = app.add_subcommand("solve3d", "Integrate the thin-domain problem for one epsilon");
  s3->add_option("--config", solve3d.config, "YAML configuration file")->check(CLI::ExistingFile);
  s3->add_option("--out", solve3d.out, "Output directory");
  s3->add_option("--epsilon", solve3d.epsilon, "Thickness (defaults to the first sweep epsilon)")
      ->check(CLI::PositiveNumber);

  InequalityArgs ineq;
  auto* si = app.add_subcommand("check-inequalities", "Check the Korn-type and Poincare-Ladyzhenskaya inequalities");
  si->add_option("--out", ineq.out, "CSV file for the per-field Korn results (default stdout)");
  si->add_option("--n", ineq.n, "Nodes per direction")->check(CLI::Range(4, 256));
  si->add_option("--fields", ineq.fields, "Number of random compliant fields")->check(CLI::PositiveNumber);
  si->add_option("--seed", ineq.seed, "Seed of the first random field");

  std::string thermo_config;
  auto* st = app.add_subcommand("check-thermo", "Check thermodynamic consistency and relative entropy coercivity");
  st->add_option("--config", thermo_config, "YAML configuration file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*s) return cmd_sweep(sweep);
    if (*s1) return cmd_solve1d(solve1d);
    if (*s3) return cmd_solve3d(solve3d);
    if (*si) return cmd_check_inequalities(ineq);
    if (*st) return cmd_check_thermo(thermo_config);
  } catch (const nsf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
