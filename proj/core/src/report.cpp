#include "nsf/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "nsf/field_io.hpp"

namespace nsf {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream o;
  const auto header = sweep_csv_header(report.config.r);
  for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << header[i];
  o << "\n";
  for (const auto& row : report.rows) {
    o << fmt17(row.epsilon) << "," << fmt17(row.time) << "," << fmt17(row.rho_norm) << "," << fmt17(row.theta_norm);
    for (double u : row.u_norm) o << "," << fmt17(u);
    o << "," << fmt17(row.rel_entropy) << "\n";
  }
  return o.str();
}

std::string verdict_text(const SweepReport& report) {
  std::ostringstream o;
  o << "verdict: " << to_string(report.verdict.overall) << "\n";
  if (report.failed()) o << "error: " << report.error << "\n";
  for (const auto& m : report.verdict.metrics) {
    o << m.metric << ": " << to_string(m.verdict) << " (";
    for (std::size_t i = 0; i < m.sup_values.size(); ++i)
      o << (i ? ", " : "") << "eps=" << m.epsilons[i] << " sup=" << m.sup_values[i];
    o << ")";
    if (!m.reason.empty()) o << " " << m.reason;
    o << "\n";
  }
  return o.str();
}

std::string metadata(const SweepReport& report) {
  using nlohmann::json;
  const SweepConfig& c = report.config;
  json meta;
  meta["started_at"] = report.started_at;
  meta["finished_at"] = report.finished_at;
  meta["scheme_version"] = kSchemeVersion;
  meta["jobs"] = report.jobs;
  meta["verdict"] = to_string(report.verdict.overall);
  meta["error"] = report.error;
  meta["grid"] = {{"n1", c.grid.n1}, {"n2", c.grid.n2}, {"n3", c.grid.n3}};
  meta["cross_section"] = {c.cross_section.a, c.cross_section.b, c.cross_section.c, c.cross_section.d};
  meta["output_cadence"] = {{"outputs", c.outputs},
                            {"t_final", c.t_final},
                            {"sup_in_time", "maximum over the output times"}};
  meta["seed"] = c.seed;
  meta["config"] = to_text(c);
  json runs = json::array();
  for (const auto& run : report.runs) {
    json r;
    r["epsilon"] = run.epsilon;
    r["h"] = {run.grid.h1, run.grid.h2, run.grid.h3};
    r["steps"] = run.steps;
    r["wall_seconds"] = run.wall_seconds;
    r["error"] = run.error;
    r["sup_t_density_norm"] = run.norms.sup_t_density_norm;
    r["sup_t_temperature_norm"] = run.norms.sup_t_temperature_norm;
    r["sup_t_rel_entropy"] = run.norms.sup_t_rel_entropy;
    r["velocity_time_integral"] = json::object();
    for (std::size_t i = 0; i < run.norms.r.size(); ++i)
      r["velocity_time_integral"][fmt17(run.norms.r[i])] = run.norms.velocity_norm_r[i];
    runs.push_back(std::move(r));
  }
  meta["runs"] = std::move(runs);
  return meta.dump(2) + "\n";
}

std::string padded(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return buf;
}

void write_run(const EpsilonRun& run, std::size_t index, SnapshotFormat format, const fs::path& dir) {
  const fs::path sub = dir / ("eps_" + std::to_string(index));
  fs::create_directories(sub);
  write_balance3d_csv(sub / "balance.csv", run.balance);
  for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
    const std::string tag = padded(run.snapshot_outputs[s]);
    if (format == SnapshotFormat::kBinary)
      write_state3d_binary(sub / ("snapshot_" + tag + ".nsf3"), run.snapshots[s]);
    else
      write_state3d_csv(sub / ("snapshot_" + tag + ".csv"), run.snapshots[s]);
    write_state1d_csv(sub / ("reference_" + tag + ".csv"), run.reference_snapshots[s]);
  }
}

}  // namespace

std::vector<std::string> sweep_csv_header(const std::vector<double>& r) {
  std::vector<std::string> h{"epsilon", "time", "rho_norm", "theta_norm"};
  for (double x : r) {
    std::ostringstream o;
    o << "u_norm_r" << x;
    h.push_back(o.str());
  }
  h.push_back("E_scaled");
  return h;
}

void emit_report(const SweepReport& report, const fs::path& dir) {
  try {
    fs::create_directories(dir);
    const fs::path csv = dir / "sweep.csv";
    if (fs::exists(csv)) fs::rename(csv, dir / "sweep.csv.bak");
    write_text(csv, sweep_csv(report));
    write_text(dir / "verdict.txt", verdict_text(report));
    write_text(dir / "metadata.json", metadata(report));
    for (std::size_t i = 0; i < report.runs.size(); ++i)
      write_run(report.runs[i], i, report.config.snapshot_format, dir);
  } catch (const fs::filesystem_error& e) {
    throw std::runtime_error(std::string("report output failed: ") + e.what());
  }
}

}  // namespace nsf
