#include "sphsync/kuramoto.hpp"
#include "sphsync/models.hpp"

#include <benchmark/benchmark.h>

using namespace sphsync;

static void BM_PhaseVelocity(benchmark::State& state) {
  const Index n = state.range(0);
  const SymmetricCost a = circulant_knn(n, n / 3);
  const PhaseVector theta = random_phases(n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(phase_velocity(a, theta.angles()));
}
BENCHMARK(BM_PhaseVelocity)->Arg(120)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_SimulateCirculant(benchmark::State& state) {
  const Index n = state.range(0);
  const SymmetricCost a = circulant_knn(n, static_cast<Index>(0.4 * n));
  const PhaseVector theta = random_phases(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(a, theta));
}
BENCHMARK(BM_SimulateCirculant)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
