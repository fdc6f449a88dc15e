#include <benchmark/benchmark.h>

#include "generators.hpp"

using namespace tcx;

namespace {

Field field_of(const benchmark::State& state) {
  return state.range(1) ? Field::prime(101) : Field::rational();
}

void BM_Rref(benchmark::State& state) {
  gen::Rng r(1);
  auto n = static_cast<std::size_t>(state.range(0));
  Matrix m = gen::random_matrix(r, n, n + 2, field_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->ArgsProduct({{6, 12, 24}, {0, 1}});

void BM_Compose(benchmark::State& state) {
  gen::Rng r(2);
  NervePtr n = gen::random_nerve(r, static_cast<int>(state.range(0)));
  Field f = field_of(state);
  auto a = gen::random_constant_family(r, n, f), b = gen::random_constant_family(r, n, f),
       c = gen::random_constant_family(r, n, f);
  Morphism u = gen::random_morphism(r, b, c, 0, 2), v = gen::random_morphism(r, a, b, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(compose(u, v));
}
BENCHMARK(BM_Compose)->ArgsProduct({{2, 3, 4}, {0, 1}});

void BM_CheckMc(benchmark::State& state) {
  gen::Rng r(3);
  TwistedComplex t = gen::random_twisted(r, gen::random_nerve(r, static_cast<int>(state.range(0))), field_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(check_mc(t));
}
BENCHMARK(BM_CheckMc)->ArgsProduct({{2, 3, 4}, {0, 1}});

void BM_Sheafify(benchmark::State& state) {
  gen::Rng r(4);
  TwistedComplex t = gen::random_twisted(r, gen::random_nerve(r, static_cast<int>(state.range(0))), field_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(t));
}
BENCHMARK(BM_Sheafify)->ArgsProduct({{2, 3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Resolution(benchmark::State& state) {
  gen::Rng r(5);
  GlobalComplex p = gen::random_global_complex(r, gen::circle_nerve(), field_of(state), true);
  ResolutionOptions opts;
  opts.minimal_models = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(twisted_resolution(p, opts));
}
BENCHMARK(BM_Resolution)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Adjunction(benchmark::State& state) {
  gen::Rng r(6);
  TwistedComplex t = gen::random_twisted(r, gen::interval_nerve(), field_of(state));
  Sheafified se = sheafify(t);
  bool materialize = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(verify_adjunction(se, materialize));
}
BENCHMARK(BM_Adjunction)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_InvertComparison(benchmark::State& state) {
  gen::Rng r(7);
  ResolutionResult res =
      twisted_resolution(gen::random_global_complex(r, gen::interval_nerve(), field_of(state), true));
  for (auto _ : state)
    benchmark::DoNotOptimize(invert_weak_equivalence(res.comparison, res.resolved, res.target));
}
BENCHMARK(BM_InvertComparison)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
