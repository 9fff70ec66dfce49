#include <benchmark/benchmark.h>

#include "nlwave/experiments.hpp"

namespace {

void run_steps(benchmark::State& state, nlwave::Integrator integrator) {
  const nlwave::Grid g(20.0, static_cast<int>(state.range(0)));
  const nlwave::WaveSystem sys(g, nlwave::EvolutionParams{});
  const double dt = sys.default_dt();
  nlwave::State st = nlwave::gaussian_state(g);
  for (auto _ : state) {
    st = integrator == nlwave::Integrator::Strang ? sys.step_strang(st, dt) : sys.step_rk4(st, dt);
    benchmark::DoNotOptimize(st.u.samples().data());
  }
}

void BM_StrangStep(benchmark::State& state) { run_steps(state, nlwave::Integrator::Strang); }
void BM_RK4Step(benchmark::State& state) { run_steps(state, nlwave::Integrator::RK4); }
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_RK4Step)->RangeMultiplier(4)->Range(256, 4096);

}  // namespace

BENCHMARK_MAIN();
