#include "nsf/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "nsf/errors.hpp"
#include "nsf/solver1d.hpp"

namespace nsf {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kUndetermined: return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

namespace {

std::string format_r(double r) {
  std::ostringstream o;
  o << r;
  return o.str();
}

MetricVerdict judge(std::string name, std::vector<double> eps, std::vector<double> v, const VerdictThresholds& th) {
  MetricVerdict m{std::move(name), std::move(eps), std::move(v), Verdict::kUndetermined, {}};
  const auto& s = m.sup_values;
  if (s.size() < 2) {
    m.reason = "single epsilon, no trend";
    return m;
  }
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (s[k + 1] > (1.0 + th.slack) * s[k] + th.floor) {
      std::ostringstream o;
      o << "increases from " << s[k] << " at eps=" << m.epsilons[k] << " to " << s[k + 1]
        << " at eps=" << m.epsilons[k + 1];
      m.verdict = Verdict::kFail;
      m.reason = o.str();
      return m;
    }
  }
  if (s.front() <= th.floor) {
    m.verdict = Verdict::kPass;
    m.reason = "all values at or below floor";
    return m;
  }
  std::ostringstream o;
  o << "total ratio " << s.back() / s.front();
  if (s.back() <= th.total_ratio * s.front()) {
    m.verdict = Verdict::kPass;
  } else {
    m.verdict = Verdict::kFail;
    o << " exceeds " << th.total_ratio;
  }
  m.reason = o.str();
  return m;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SweepRow make_row(double eps, const ScaledNormSample& s) {
  return SweepRow{eps, s.time, s.rho_norm, s.theta_norm, s.r, s.u_norm, s.rel_entropy};
}

void advance_reference(const ThermoModel& model, State1D& ref, double dt) {
  const double limit = stable_dt_1d(model, ref, 0.9);
  const int pieces = std::max(1, static_cast<int>(std::ceil(dt / limit)));
  const double sub = dt / pieces;
  for (int p = 0; p < pieces; ++p) ref = step(model, ref, sub);
}

EpsilonRun run_case(const SweepConfig& config, const ThermoModel& model, const State1D& initial1d, double eps,
                    const SweepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  EpsilonRun run;
  run.epsilon = eps;
  run.grid = build_domain(config.cross_section, eps, config.grid);
  const auto keep_snapshot = [&](int output) {
    return config.snapshot_stride > 0 && (output % config.snapshot_stride == 0 || output == config.outputs);
  };
  try {
    State1D ref = initial1d;
    Solver3D solver(model, lift_initial_data(ref, config.perturbation, run.grid));
    const auto record = [&](int output) {
      ScaledNormSample s = scaled_norms(model, solver.state(), ref, config.r);
      s.time = solver.state().t;
      run.norms.add(s);
      run.rows.push_back(make_row(eps, s));
      run.balance.push_back(solver.balance());
      if (keep_snapshot(output)) {
        run.snapshot_outputs.push_back(output);
        run.snapshots.push_back(solver.state());
        run.reference_snapshots.push_back(ref);
      }
    };
    record(0);
    const double tf = config.t_final;
    for (int k = 1; k <= config.outputs; ++k) {
      const double t_next = tf * k / config.outputs;
      while (solver.state().t < t_next - 1e-12 * tf) {
        const double t = solver.state().t;
        double dt = solver.stable_dt(config.cfl);
        if (t + dt >= t_next - 1e-12 * tf) dt = t_next - t;
        try {
          solver.advance(dt);
          advance_reference(model, ref, dt);
        } catch (const std::exception& e) {
          throw SolverError("step failed at t = " + std::to_string(t) + ": " + e.what());
        }
        ref.t = solver.state().t;
        ++run.steps;
      }
      record(k);
      if (options.log && k % 10 == 0) {
        std::ostringstream o;
        o << "eps=" << eps << " t=" << solver.state().t << " steps=" << run.steps;
        options.log(o.str());
      }
    }
  } catch (const std::exception& e) {
    std::ostringstream o;
    o << "eps=" << eps << ": " << e.what();
    run.error = o.str();
  }
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace

VerdictSummary evaluate_verdict(std::span<const SweepRow> rows, const VerdictThresholds& th) {
  VerdictSummary out;
  if (rows.empty()) return out;
  const std::vector<double>& r = rows.front().r;
  struct Sup {
    double rho = 0.0, theta = 0.0, rel = 0.0;
    std::vector<double> u;
  };
  std::map<double, Sup, std::greater<>> by_eps;
  for (const auto& row : rows) {
    if (row.r != r || row.u_norm.size() != r.size())
      throw PreconditionError("evaluate_verdict: rows disagree on r exponents");
    Sup& s = by_eps[row.epsilon];
    s.u.resize(r.size(), 0.0);
    s.rho = std::max(s.rho, row.rho_norm);
    s.theta = std::max(s.theta, row.theta_norm);
    s.rel = std::max(s.rel, row.rel_entropy);
    for (std::size_t i = 0; i < r.size(); ++i) s.u[i] = std::max(s.u[i], row.u_norm[i]);
  }
  std::vector<double> eps;
  for (const auto& [e, s] : by_eps) eps.push_back(e);
  const auto collect = [&](auto get) {
    std::vector<double> v;
    for (const auto& [e, s] : by_eps) v.push_back(get(s));
    return v;
  };
  out.metrics.push_back(judge("rho_norm", eps, collect([](const Sup& s) { return s.rho; }), th));
  out.metrics.push_back(judge("theta_norm", eps, collect([](const Sup& s) { return s.theta; }), th));
  for (std::size_t i = 0; i < r.size(); ++i)
    out.metrics.push_back(
        judge("u_norm_r" + format_r(r[i]), eps, collect([i](const Sup& s) { return s.u[i]; }), th));
  out.metrics.push_back(judge("E_scaled", eps, collect([](const Sup& s) { return s.rel; }), th));

  if (eps.size() < 2) {
    out.overall = Verdict::kUndetermined;
  } else {
    const bool any_fail = std::any_of(out.metrics.begin(), out.metrics.end(),
                                      [](const MetricVerdict& m) { return m.verdict == Verdict::kFail; });
    out.overall = any_fail ? Verdict::kFail : Verdict::kPass;
  }
  return out;
}

int effective_jobs(int requested, std::size_t cases) {
  int jobs = std::max(1, requested);
  if (const char* env = std::getenv("NSF_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) jobs = std::min<long>(jobs, cap);
  }
  if (cases > 0) jobs = std::min<int>(jobs, static_cast<int>(cases));
  return std::max(1, jobs);
}

SweepReport run_sweep(const SweepConfig& config, const SweepOptions& options) {
  SweepReport report;
  report.config = config;
  report.started_at = utc_now();
  report.jobs = effective_jobs(options.jobs, config.epsilons.size());

  const ThermoModel model = config.model();
  const State1D initial1d = init_smooth(config.profile(), config.grid.n3);

  const std::size_t n = config.epsilons.size();
  report.runs.resize(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  SweepOptions worker_options = options;
  if (options.log) {
    worker_options.log = [&](const std::string& msg) {
      std::lock_guard lock(log_mutex);
      options.log(msg);
    };
  }
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      report.runs[i] = run_case(config, model, initial1d, config.epsilons[i], worker_options);
  };
  if (report.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < report.jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& run : report.runs) {
    report.rows.insert(report.rows.end(), run.rows.begin(), run.rows.end());
    if (report.error.empty() && !run.error.empty()) report.error = run.error;
  }
  report.verdict = evaluate_verdict(report.rows);
  report.finished_at = utc_now();
  return report;
}

}  // namespace nsf
