// OpenMP kernels against the serial reference on a droplet-like field.

#include <benchmark/benchmark.h>

#include <vector>

#include "droplet/analytic.hpp"
#include "droplet/field.hpp"
#include "droplet/kernels.hpp"

namespace {

using namespace droplet;

Field make_field(int d, int N) {
  const double L = d == 2 ? 200.0 : 60.0;
  const Grid g{d, N, L};
  const auto spec = ProblemSpec::from_K(d, L, 2.0 * critical_constants(d).K_star);
  return fractional_droplet(g, spec.n, 0.8).field;
}

void BM_EnergyOmp(benchmark::State& state) {
  const Field f = make_field(int(state.range(0)), int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy(f.grid(), f.values()));
  state.SetItemsProcessed(state.iterations() * f.size());
}

void BM_EnergyReference(benchmark::State& state) {
  const Field f = make_field(int(state.range(0)), int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::energy(f.grid(), f.values()));
  state.SetItemsProcessed(state.iterations() * f.size());
}

void BM_VariationOmp(benchmark::State& state) {
  const Field f = make_field(int(state.range(0)), int(state.range(1)));
  std::vector<double> out(f.size());
  for (auto _ : state) {
    kernels::variation(f.grid(), f.values(), out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}

void BM_VariationReference(benchmark::State& state) {
  const Field f = make_field(int(state.range(0)), int(state.range(1)));
  std::vector<double> out(f.size());
  for (auto _ : state) {
    reference::variation(f.grid(), f.values(), out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}

void BM_EnergyAndVariationOmp(benchmark::State& state) {
  const Field f = make_field(int(state.range(0)), int(state.range(1)));
  std::vector<double> out(f.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::energy_and_variation(f.grid(), f.values(), out));
  state.SetItemsProcessed(state.iterations() * f.size());
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({2, 256})->Args({2, 1024})->Args({3, 64})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_EnergyOmp)->Apply(sizes);
BENCHMARK(BM_EnergyReference)->Apply(sizes);
BENCHMARK(BM_VariationOmp)->Apply(sizes);
BENCHMARK(BM_VariationReference)->Apply(sizes);
BENCHMARK(BM_EnergyAndVariationOmp)->Apply(sizes);

BENCHMARK_MAIN();
