#include "mdicke/hamiltonian.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

// Args: N (sector j = N/2), N_tr.
void BM_HamiltonianApply(benchmark::State& state) {
  mdicke::ModelParams p;
  p.n_atoms = static_cast<int>(state.range(0));
  p.lambda = 0.6;
  p.capital_omega = 0.25;
  const mdicke::HamiltonianAction h(p, mdicke::SectorBasis(p.n_atoms, static_cast<int>(state.range(1))));
  std::vector<double> in(h.dimension(), 1.0), out(h.dimension());
  for (auto _ : state) {
    h.apply(in, out);
    benchmark::DoNotOptimize(out.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(h.dimension()));
}
BENCHMARK(BM_HamiltonianApply)
    ->Args({16, 24})
    ->Args({64, 24})
    ->Args({256, 24})
    ->Args({512, 24})
    ->Args({256, 48});

void BM_HamiltonianSetup(benchmark::State& state) {
  mdicke::ModelParams p;
  p.n_atoms = static_cast<int>(state.range(0));
  p.lambda = 0.6;
  for (auto _ : state) {
    mdicke::HamiltonianAction h(p, mdicke::SectorBasis(p.n_atoms, 24));
    benchmark::DoNotOptimize(&h);
  }
}
BENCHMARK(BM_HamiltonianSetup)->Arg(64)->Arg(512);

}  // namespace
