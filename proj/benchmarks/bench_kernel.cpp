#include "mdicke/kernel.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_DisplacementMatrix(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto m = mdicke::displacement_matrix(0.7, size);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DisplacementMatrix)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

// The term-by-term sum, for comparison.
void BM_OverlapSeries(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto m = mdicke::overlap_kernel_series(0.7, size);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_OverlapSeries)->RangeMultiplier(2)->Range(16, 128);

}  // namespace
