#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "nlwave/kernels.hpp"
#include "nlwave/spectral.hpp"

namespace {

nlwave::Field bump(const nlwave::Grid& g) {
  return nlwave::Field::from_function(g, [](double x) { return std::exp(-x * x) * std::cos(3 * x); });
}

void BM_SobolevNorm(benchmark::State& state) {
  const nlwave::Grid g(20.0, static_cast<int>(state.range(0)));
  const nlwave::Field f = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(nlwave::sobolev_norm(f, 2.0));
}
BENCHMARK(BM_SobolevNorm)->RangeMultiplier(4)->Range(256, 16384);

void BM_ApplyKDx(benchmark::State& state) {
  const nlwave::Grid g(20.0, static_cast<int>(state.range(0)));
  const nlwave::Field f = bump(g);
  const nlwave::Kernel k = nlwave::builtin_kernel("exponential");
  for (auto _ : state) benchmark::DoNotOptimize(nlwave::apply_KDx(k, f));
}
BENCHMARK(BM_ApplyKDx)->RangeMultiplier(4)->Range(256, 16384);

void BM_DealiasedCube(benchmark::State& state) {
  const nlwave::Grid g(20.0, static_cast<int>(state.range(0)));
  const nlwave::Field f = bump(g);
  const std::vector<nlwave::Field> factors{f, f, f};
  for (auto _ : state) benchmark::DoNotOptimize(nlwave::dealias_product(factors, 3));
}
BENCHMARK(BM_DealiasedCube)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace

BENCHMARK_MAIN();
