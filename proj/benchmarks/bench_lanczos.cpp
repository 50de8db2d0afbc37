#include "mdicke/eigensolver.hpp"
#include "mdicke/meanfield.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SectorLanczos(benchmark::State& state) {
  mdicke::ModelParams p;
  p.n_atoms = static_cast<int>(state.range(0));
  p.lambda = 0.5;
  const mdicke::HamiltonianAction h(p, mdicke::SectorBasis(p.n_atoms, 24));
  const mdicke::SolverConfig cfg;
  int iterations = 0;
  for (auto _ : state) {
    auto pair = mdicke::lanczos_lowest(h, cfg);
    iterations = pair.iterations;
    benchmark::DoNotOptimize(pair.energy);
  }
  state.counters["matvecs"] = iterations;
}
BENCHMARK(BM_SectorLanczos)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

// Full variational solve at the critical coupling: N_tr growth plus sector scan.
void BM_GroundStateCritical(benchmark::State& state) {
  mdicke::ModelParams p;
  p.n_atoms = static_cast<int>(state.range(0));
  p.capital_omega = 0.25;
  p.lambda = mdicke::critical_coupling(p);
  const mdicke::SolverConfig cfg;
  for (auto _ : state) {
    auto gs = mdicke::ground_state(p, cfg);
    benchmark::DoNotOptimize(gs.energy);
  }
}
BENCHMARK(BM_GroundStateCritical)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
