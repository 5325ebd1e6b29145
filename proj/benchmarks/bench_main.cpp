#include <benchmark/benchmark.h>

#include <memory>

#include "hecke/divisor.hpp"
#include "hecke/graph.hpp"
#include "hecke/spectral.hpp"

namespace {

using namespace hecke;

// args: q, n_max
void BM_BuildHybridRamified(benchmark::State& state) {
  const auto F = FieldCtx::make(static_cast<unsigned>(state.range(0)));
  const auto D = parse_divisor(*F, "x:1,y:1");
  const auto x = parse_point_name(*F, "x");
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(F, D, x, static_cast<int>(state.range(1)), Builder::hybrid, 1));
}
BENCHMARK(BM_BuildHybridRamified)->Args({2, 8})->Args({3, 7})->Args({4, 6})->Unit(benchmark::kMillisecond);

void BM_BuildBruteforce(benchmark::State& state) {
  const auto F = FieldCtx::make(static_cast<unsigned>(state.range(0)));
  const auto D = parse_divisor(*F, "y:2");
  const auto x = parse_point_name(*F, "x");
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(F, D, x, 6, Builder::bruteforce, 1));
}
BENCHMARK(BM_BuildBruteforce)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Canonicalize(benchmark::State& state) {
  const auto F = FieldCtx::make(static_cast<unsigned>(state.range(0)));
  VertexSpace space(F, parse_divisor(*F, "x:2,y:1"), parse_point_name(*F, "x"));
  const int n = 6;
  const auto reps = space.orbit_reps(n);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.canonical(n, reps[i]));
    i = (i + 1) % reps.size();
  }
}
BENCHMARK(BM_Canonicalize)->Arg(2)->Arg(3);

void BM_DimBounds(benchmark::State& state) {
  const auto F = FieldCtx::make(static_cast<unsigned>(state.range(0)));
  const auto G = std::make_shared<const HeckeGraph>(
      build_graph(F, parse_divisor(*F, "x:1,y:1"), parse_point_name(*F, "x"), 7, Builder::hybrid));
  const auto L = layer_decompose(G);
  const AlgNum lambda(NumberField::rationals(), mpq_class(7));
  for (auto _ : state) benchmark::DoNotOptimize(dim_bounds(lambda, L));
}
BENCHMARK(BM_DimBounds)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto F = FieldCtx::make(2);
  const auto G = std::make_shared<const HeckeGraph>(
      build_graph(F, parse_divisor(*F, "x:1"), parse_point_name(*F, "x"), static_cast<int>(state.range(0)) + 3,
                  Builder::hybrid));
  const auto L = layer_decompose(G);
  const AlgNum lambda(NumberField::rationals(), mpq_class(3));
  const ValueTable seed = complete_seed(lambda, {{L.nucleus.front(), AlgNum(1)}}, L);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_eigenform(lambda, seed, L, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Propagate)->Arg(12)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
