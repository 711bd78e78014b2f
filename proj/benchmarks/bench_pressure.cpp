#include <benchmark/benchmark.h>

#include "schottky/thermo.hpp"

using namespace schottky;

static void BM_LengthTable(benchmark::State& state) {
  SchottkyData data = reference_schottky();
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(log_interval_length_table(data, depth));
  state.SetItemsProcessed(state.iterations() * (4L << (depth - 1)));
}
BENCHMARK(BM_LengthTable)->Arg(8)->Arg(10)->Arg(12);

static void BM_DimensionBisection(benchmark::State& state) {
  SchottkyData data = reference_schottky();
  for (auto _ : state)
    benchmark::DoNotOptimize(hausdorff_dimension(data, static_cast<int>(state.range(0)), 1e-4));
}
BENCHMARK(BM_DimensionBisection)->Arg(8)->Arg(10);
