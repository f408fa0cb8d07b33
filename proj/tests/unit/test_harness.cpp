#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nsf/config.hpp"
#include "nsf/errors.hpp"
#include "nsf/field_io.hpp"
#include "nsf/report.hpp"
#include "nsf/sweep.hpp"

using namespace nsf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nsf_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

SweepRow row(double eps, double t, double v) { return SweepRow{eps, t, v, v, {1.0}, {v}, v}; }

// Tiny sweep: three epsilons, 4 x 4 x 16 cells, short horizon.
SweepConfig tiny_sweep() {
  return parse_config(
      "sweep:\n"
      "  epsilons: [0.5, 0.25, 0.125]\n"
      "  n1: 4\n  n2: 4\n  n3: 16\n"
      "  T_final: 0.004\n"
      "  outputs: 4\n"
      "output:\n"
      "  snapshot_stride: 2\n");
}

}  // namespace

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
  const SweepConfig c = parse_config("");
  EXPECT_EQ(c.epsilons, (std::vector<double>{0.5, 0.25, 0.125}));
  EXPECT_EQ(c.r, (std::vector<double>{1.0, 1.5}));
  EXPECT_EQ(c.grid.n3, 64);
  EXPECT_EQ(c.outputs, 50);
  EXPECT_EQ(c.closure, "power_sum");
  EXPECT_DOUBLE_EQ(c.perturbation.delta, 0.05);
}

TEST(ParseConfig, MinimalFileFillsRemainingDefaults) {
  const SweepConfig c = parse_config("thermo:\n  a: 2.0\n  P_closure: saturating\nsweep:\n  T_final: 0.5\n");
  EXPECT_DOUBLE_EQ(c.thermo.a, 2.0);
  EXPECT_EQ(c.closure, "saturating");
  EXPECT_DOUBLE_EQ(c.t_final, 0.5);
  EXPECT_DOUBLE_EQ(c.thermo.mu0, 1.0);
  EXPECT_EQ(c.model().closure().name(), "saturating");
}

TEST(ParseConfig, RejectsRepeatedEpsilon) {
  EXPECT_EQ(error_line("# comment\nsweep:\n  epsilons: [0.5, 0.5]\n"), 3);
}

TEST(ParseConfig, RejectsRTwo) {
  EXPECT_EQ(error_line("sweep:\n  r: [1.0, 2.0]\n"), 2);
}

TEST(ParseConfig, RejectsUnknownKeyAndSection) {
  EXPECT_EQ(error_line("thermo:\n  a: 1\n  gamma: 1.4\n"), 3);
  EXPECT_EQ(error_line("solver:\n  cfl: 0.4\n"), 1);
}

TEST(ParseConfig, RejectsMalformedValues) {
  EXPECT_EQ(error_line("sweep:\n  n1: four\n"), 2);
  EXPECT_EQ(error_line("sweep:\n  T_final: -1\n"), 2);
  EXPECT_EQ(error_line("thermo:\n  mu0: 0\n"), 2);
  EXPECT_EQ(error_line("profile:\n  u_shape: cos\n"), 2);
  EXPECT_EQ(error_line("profile:\n  rho_amp: 1.5\n"), 2);
  EXPECT_GT(error_line("sweep: [1, 2\n"), 0);
}

TEST(ParseConfig, RoundTripsThroughText) {
  SweepConfig c = parse_config("sweep:\n  epsilons: [0.3, 0.1]\n  seed: 42\nperturbation:\n  delta: 0.01\n");
  c.out_dir = "runs/a";
  const SweepConfig d = parse_config(to_text(c));
  EXPECT_EQ(d.epsilons, c.epsilons);
  EXPECT_EQ(d.seed, 42u);
  EXPECT_DOUBLE_EQ(d.perturbation.delta, 0.01);
  EXPECT_EQ(d.out_dir, "runs/a");
  EXPECT_EQ(to_text(d), to_text(c));
}

TEST(Verdict, DecreasingSequencePasses) {
  const std::vector<SweepRow> rows{row(0.5, 0, 1.0), row(0.5, 1, 0.5), row(0.25, 0, 0.4), row(0.125, 0, 0.2)};
  const auto v = evaluate_verdict(rows);
  EXPECT_EQ(v.overall, Verdict::kPass);
  EXPECT_EQ(v.metrics.front().sup_values, (std::vector<double>{1.0, 0.4, 0.2}));
}

TEST(Verdict, SlackAndTotalRatio) {
  std::vector<SweepRow> rows{row(0.5, 0, 1.0), row(0.25, 0, 1.04), row(0.125, 0, 0.2)};
  EXPECT_EQ(evaluate_verdict(rows).overall, Verdict::kPass);
  rows[1] = row(0.25, 0, 1.06);
  EXPECT_EQ(evaluate_verdict(rows).overall, Verdict::kFail);
  rows = {row(0.5, 0, 1.0), row(0.25, 0, 0.5), row(0.125, 0, 0.3)};
  EXPECT_EQ(evaluate_verdict(rows).overall, Verdict::kFail);
}

TEST(Verdict, SingleEpsilonIsUndetermined) {
  const std::vector<SweepRow> rows{row(0.5, 0, 1.0), row(0.5, 1, 0.5)};
  const auto v = evaluate_verdict(rows);
  EXPECT_EQ(v.overall, Verdict::kUndetermined);
  EXPECT_EQ(v.metrics.front().sup_values, (std::vector<double>{1.0}));
}

TEST(Verdict, ValuesAtFloorPass) {
  const std::vector<SweepRow> rows{row(0.5, 0, 1e-20), row(0.25, 0, 3e-20), row(0.125, 0, 2e-20)};
  EXPECT_EQ(evaluate_verdict(rows).overall, Verdict::kPass);
}

TEST(Verdict, MixedExponentsRejected) {
  std::vector<SweepRow> rows{row(0.5, 0, 1.0), row(0.25, 0, 0.2)};
  rows[1].r = {1.5};
  EXPECT_THROW(evaluate_verdict(rows), PreconditionError);
}

TEST(EffectiveJobs, CappedByEnvironmentAndCases) {
  ::unsetenv("NSF_THREADS");
  EXPECT_EQ(effective_jobs(8, 3), 3);
  EXPECT_EQ(effective_jobs(0, 3), 1);
  ::setenv("NSF_THREADS", "2", 1);
  EXPECT_EQ(effective_jobs(8, 3), 2);
  ::setenv("NSF_THREADS", "junk", 1);
  EXPECT_EQ(effective_jobs(8, 5), 5);
  ::unsetenv("NSF_THREADS");
}

TEST(FieldIo, BinarySnapshotRoundTrip) {
  const Grid3D g = build_domain(CrossSection{0.0, 2.0, -1.0, 1.0}, 0.25, GridPolicy{3, 4, 5});
  State3D s(g);
  s.t = 0.125;
  for (std::size_t c = 0; c < g.size(); ++c) {
    s.rho[c] = 1.0 + 0.01 * c;
    s.u1[c] = -0.5 * c;
    s.u2[c] = 1e-300 * c;
    s.u3[c] = 3.0;
    s.theta[c] = 2.0 - 1e-3 * c;
  }
  const fs::path dir = scratch("io");
  fs::create_directories(dir);
  write_state3d_binary(dir / "s.nsf3", s);
  EXPECT_EQ(fs::file_size(dir / "s.nsf3"), 4 + 4 + 12 + 48 + 5 * 8 * g.size());
  const State3D r = read_state3d_binary(dir / "s.nsf3");
  EXPECT_EQ(r.grid.n1, 3);
  EXPECT_EQ(r.grid.n3, 5);
  EXPECT_EQ(r.grid.epsilon, 0.25);
  EXPECT_EQ(r.grid.q.c, -1.0);
  EXPECT_EQ(r.t, 0.125);
  EXPECT_EQ(r.rho, s.rho);
  EXPECT_EQ(r.u2, s.u2);
  EXPECT_EQ(r.theta, s.theta);
  std::ofstream(dir / "bad.nsf3") << "NSF4junk";
  EXPECT_THROW(read_state3d_binary(dir / "bad.nsf3"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(EmitReport, EmptyReportWritesHeaderOnly) {
  SweepReport rep;
  rep.config = parse_config("");
  const fs::path dir = scratch("empty");
  emit_report(rep, dir);
  EXPECT_EQ(slurp(dir / "sweep.csv"), "epsilon,time,rho_norm,theta_norm,u_norm_r1,u_norm_r1.5,E_scaled\n");
  EXPECT_TRUE(fs::exists(dir / "verdict.txt"));
  EXPECT_TRUE(fs::exists(dir / "metadata.json"));
  fs::remove_all(dir);
}

TEST(RunSweep, ThreeEpsilonReportAndRerunBackup) {
  const SweepConfig c = tiny_sweep();
  const SweepReport rep = run_sweep(c);
  ASSERT_FALSE(rep.failed()) << rep.error;
  EXPECT_EQ(rep.rows.size(), 3u * (c.outputs + 1));
  const fs::path dir = scratch("sweep");
  emit_report(rep, dir);
  EXPECT_EQ(line_count(dir / "sweep.csv"), 1 + 3u * (c.outputs + 1));
  for (const char* sub : {"eps_0", "eps_1", "eps_2"}) {
    EXPECT_TRUE(fs::exists(dir / sub / "balance.csv"));
    EXPECT_TRUE(fs::exists(dir / sub / "snapshot_0000.nsf3"));
    EXPECT_TRUE(fs::exists(dir / sub / "snapshot_0004.nsf3"));
    EXPECT_TRUE(fs::exists(dir / sub / "reference_0002.csv"));
  }
  const std::string first = slurp(dir / "sweep.csv");
  emit_report(rep, dir);
  EXPECT_EQ(slurp(dir / "sweep.csv.bak"), first);
  fs::remove_all(dir);
}

TEST(RunSweep, DeterministicAcrossJobCounts) {
  const SweepConfig c = tiny_sweep();
  SweepOptions one, three;
  three.jobs = 3;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  emit_report(run_sweep(c, one), a);
  emit_report(run_sweep(c, three), b);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
  EXPECT_EQ(slurp(a / "eps_2" / "snapshot_0004.nsf3"), slurp(b / "eps_2" / "snapshot_0004.nsf3"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunSweep, ExactLiftPassesTrivially) {
  SweepConfig c = tiny_sweep();
  c.perturbation.delta = 0.0;
  const SweepReport rep = run_sweep(c);
  EXPECT_EQ(rep.verdict.overall, Verdict::kPass);
  for (const auto& r : rep.rows) EXPECT_LT(r.rho_norm, 1e-20);
}

TEST(RunSweep, ExactLiftInvariantUnderTransverseRefinement) {
  SweepConfig c = tiny_sweep();
  c.perturbation.delta = 0.0;
  c.epsilons = {0.5};
  const SweepReport coarse = run_sweep(c);
  c.grid.n1 = c.grid.n2 = 8;
  const SweepReport fine = run_sweep(c);
  ASSERT_EQ(coarse.rows.size(), fine.rows.size());
  for (std::size_t k = 0; k < coarse.rows.size(); ++k) {
    EXPECT_NEAR(coarse.rows[k].theta_norm, fine.rows[k].theta_norm, 1e-20);
    EXPECT_NEAR(coarse.rows[k].rel_entropy, fine.rows[k].rel_entropy, 1e-15);
  }
}

TEST(RunSweep, SingleEpsilonIsUndeterminedWithNorms) {
  SweepConfig c = tiny_sweep();
  c.epsilons = {0.25};
  const SweepReport rep = run_sweep(c);
  EXPECT_EQ(rep.verdict.overall, Verdict::kUndetermined);
  EXPECT_EQ(rep.rows.size(), static_cast<std::size_t>(c.outputs + 1));
  EXPECT_GT(rep.rows.front().rho_norm, 0.0);
}

TEST(RunSweep, CaseFailureIsRecordedAndReported) {
  SweepConfig c = tiny_sweep();
  c.epsilons = {0.5, 0.25};
  c.perturbation.delta = 100.0;  // lifted density turns negative
  c.perturbation.alpha = 0.0;
  const SweepReport rep = run_sweep(c);
  EXPECT_TRUE(rep.failed());
  EXPECT_NE(rep.error.find("eps=0.5"), std::string::npos);
  const fs::path dir = scratch("partial");
  emit_report(rep, dir);
  EXPECT_NE(slurp(dir / "verdict.txt").find("error:"), std::string::npos);
  fs::remove_all(dir);
}
