#include <benchmark/benchmark.h>

#include <rqp/builtins.hpp>
#include <rqp/sim.hpp>

using namespace rqp;

namespace {

void bm_sim_1dof_barrier(benchmark::State& state) {
  Scenario s = builtin_scenario("fig7-ffwd");
  s.t_end = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s));
  }
}
BENCHMARK(bm_sim_1dof_barrier);

void bm_sim_planar(benchmark::State& state) {
  Scenario s = builtin_scenario("planar-halfplane-recbf");
  s.t_end = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(s));
  }
}
BENCHMARK(bm_sim_planar);

void bm_metrics(benchmark::State& state) {
  Scenario s = builtin_scenario("fig4-left");
  const SimLog log = run_scenario(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_metrics(log, s.metrics.osc_window));
  }
}
BENCHMARK(bm_metrics);

}  // namespace
