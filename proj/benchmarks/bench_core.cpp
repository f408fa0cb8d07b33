#include <benchmark/benchmark.h>

#include "nsf/inequalities.hpp"
#include "nsf/solver1d.hpp"
#include "nsf/solver3d.hpp"

using namespace nsf;

namespace {

State1D reference(int n) {
  return init_smooth(make_profile({1.0, 0.2, 1, false}, {0.0, 0.2, 1, true}, {1.0, 0.2, 1, false}), n);
}

void BM_Step1D(benchmark::State& st) {
  const ThermoModel m;
  const State1D s = reference(static_cast<int>(st.range(0)));
  const double dt = stable_dt_1d(m, s);
  for (auto _ : st) benchmark::DoNotOptimize(step(m, s, dt));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step1D)->Arg(64)->Arg(256)->Arg(1024);

void BM_Step3D(benchmark::State& st) {
  const ThermoModel m;
  const int n = static_cast<int>(st.range(0));
  const Grid3D g = build_domain(CrossSection{}, 0.25, GridPolicy{n, n, 4 * n});
  const State3D s = lift_initial_data(reference(4 * n), PerturbationSpec{}, g);
  const double dt = stable_dt_3d(m, s);
  for (auto _ : st) benchmark::DoNotOptimize(step3d(m, s, dt));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_Step3D)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_KornReport(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto f = random_compliant_field(NodeGrid::box(n, n, n), 1);
  for (auto _ : st) benchmark::DoNotOptimize(korn_report(f));
}
BENCHMARK(BM_KornReport)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
