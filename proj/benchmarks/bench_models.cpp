#include "sphsync/models.hpp"

#include <benchmark/benchmark.h>

using namespace sphsync;

static void BM_GenerateGaussian(benchmark::State& state) {
  ModelSpec spec;
  spec.n = state.range(0);
  spec.sigma = 1.0;
  for (auto _ : state) {
    ++spec.seed;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_GenerateGaussian)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_GenerateSbm(benchmark::State& state) {
  ModelSpec spec;
  spec.family = Family::kSbm;
  spec.n = state.range(0);
  spec.p = 0.2;
  spec.q = 0.02;
  spec.ground_truth = GroundTruth::kBalanced;
  for (auto _ : state) {
    ++spec.seed;
    benchmark::DoNotOptimize(generate(spec));
  }
}
BENCHMARK(BM_GenerateSbm)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_RandomRegular(benchmark::State& state) {
  const Index n = state.range(0);
  const Index d = state.range(1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(random_regular(n, d, ++seed));
}
BENCHMARK(BM_RandomRegular)->Args({500, 20})->Args({2000, 40})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
