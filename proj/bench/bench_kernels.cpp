// Serial reference against the OpenMP kernels: refine/decode intersection,
// the primitive-root injectivity sweep and the statistical-lemma Monte Carlo.

#include <benchmark/benchmark.h>

#include "rankone/analysis.hpp"
#include "rankone/families.hpp"
#include "rankone/finite_field.hpp"

using namespace rankone;

namespace {

struct RefineCase {
  TowerChain chain{make_schedule("chacon_classical")};
  LevelSet a = LevelSet::full(12, chain);
  BigInt n = chain.height(18) + 3;
  EngineOptions opts;
};

RefineCase& refine_case() {
  static RefineCase c;
  c.opts.tol = Rational(1, 1000000);
  return c;
}

void BM_RefineSerial(benchmark::State& state) {
  auto& c = refine_case();
  for (auto _ : state) benchmark::DoNotOptimize(shifted_intersection_serial(c.chain, c.a, c.n, c.a, c.opts));
}

void BM_RefineParallel(benchmark::State& state) {
  auto& c = refine_case();
  for (auto _ : state) benchmark::DoNotOptimize(shifted_intersection_parallel(c.chain, c.a, c.n, c.a, c.opts));
}

void BM_InjectivitySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(injectivity_sweep_serial(static_cast<std::uint64_t>(state.range(0))));
}

void BM_InjectivityParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(injectivity_sweep_parallel(static_cast<std::uint64_t>(state.range(0))));
}

void BM_StatLemmaSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stat_lemma_mc_serial(10000, 100, 0.1, state.range(0), 1));
}

void BM_StatLemmaParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stat_lemma_mc_parallel(10000, 100, 0.1, state.range(0), 1));
}

}  // namespace

BENCHMARK(BM_RefineSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RefineParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_InjectivitySerial)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InjectivityParallel)->Arg(3000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StatLemmaSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StatLemmaParallel)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
