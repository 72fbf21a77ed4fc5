#include "sphsync/models.hpp"
#include "sphsync/optimizer.hpp"

#include <benchmark/benchmark.h>

using namespace sphsync;

static void BM_SolveGaussian(benchmark::State& state) {
  const Index n = state.range(0);
  const Index r = state.range(1);
  ModelSpec spec;
  spec.n = n;
  spec.sigma = 0.5 * gaussian_sigma_star(n);
  spec.seed = 3;
  spec.ground_truth = GroundTruth::kRandom;
  const Instance inst = generate(spec);
  SolveOptions opts;
  opts.seed = 4;
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst.cost, r, opts, inst.z));
}
BENCHMARK(BM_SolveGaussian)->Args({100, 2})->Args({300, 2})->Args({300, 4})->Unit(benchmark::kMillisecond);

static void BM_Gradient(benchmark::State& state) {
  const Index n = state.range(0);
  ModelSpec spec;
  spec.n = n;
  spec.sigma = 1.0;
  spec.seed = 5;
  const Instance inst = generate(spec);
  const SphereConfig y = random_init(n, 3, 6);
  for (auto _ : state) benchmark::DoNotOptimize(riemannian_gradient(inst.cost, y));
}
BENCHMARK(BM_Gradient)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);
