#include <benchmark/benchmark.h>

#include "schottky/cover.hpp"
#include "schottky/transfer.hpp"

using namespace schottky;

static void BM_LetterAssembly(benchmark::State& state) {
  OperatorAssembler assembler(reference_schottky(),
                              BasisSpec{static_cast<int>(state.range(0)), 128});
  Complex s(0.6, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(assembler.letter_matrix(0, s));
}
BENCHMARK(BM_LetterAssembly)->Arg(12)->Arg(16)->Arg(24);

static void BM_FredholmDetTrivial(benchmark::State& state) {
  OperatorAssembler assembler(reference_schottky(),
                              BasisSpec{static_cast<int>(state.range(0)), 128});
  Representation triv = Representation::trivial(4);
  Complex s(0.6, 0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(fredholm_det(assembler, s, triv));
}
BENCHMARK(BM_FredholmDetTrivial)->Arg(12)->Arg(16)->Arg(24);

static void BM_FredholmDetCover(benchmark::State& state) {
  OperatorAssembler assembler(reference_schottky(), BasisSpec{12, 128});
  CoverSample sample = sample_symmetric(static_cast<int>(state.range(0)), 2, 1);
  PermutationMatrices perms = permutation_matrices(sample);
  Complex s(0.27, 0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(fredholm_det(assembler, s, perms.rho0));
}
BENCHMARK(BM_FredholmDetCover)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
