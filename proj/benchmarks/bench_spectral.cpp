#include "sphsync/certificates.hpp"
#include "sphsync/circulant.hpp"
#include "sphsync/models.hpp"
#include "sphsync/spectral.hpp"
#include "sphsync/sphere_ops.hpp"

#include <benchmark/benchmark.h>

using namespace sphsync;

static void BM_LaplacianSpectrum(benchmark::State& state) {
  const Index n = state.range(0);
  ModelSpec spec;
  spec.n = n;
  spec.sigma = 0.5 * gaussian_sigma_star(n);
  spec.seed = 1;
  const Instance inst = generate(spec);
  const Laplacian l = laplacian(inst.cost, inst.z);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(l));
}
BENCHMARK(BM_LaplacianSpectrum)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_BenignCheck(benchmark::State& state) {
  const Index n = state.range(0);
  ModelSpec spec;
  spec.n = n;
  spec.sigma = 0.5 * gaussian_sigma_star(n);
  spec.seed = 2;
  const Instance inst = generate(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(benign_landscape_check(inst.cost, inst.z, 2, Preconditioner::degree()));
  }
}
BENCHMARK(BM_BenignCheck)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_DftSpectrum(benchmark::State& state) {
  const Index n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dft_spectrum(n, n / 3));
}
BENCHMARK(BM_DftSpectrum)->Arg(120)->Arg(1200)->Unit(benchmark::kMicrosecond);

static void BM_CriticalDensity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(critical_density());
}
BENCHMARK(BM_CriticalDensity)->Unit(benchmark::kMicrosecond);
