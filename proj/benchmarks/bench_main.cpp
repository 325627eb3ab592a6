#include <benchmark/benchmark.h>

#include "plstat/ensembles.hpp"
#include "plstat/limit_laws.hpp"
#include "plstat/sampling_clt.hpp"
#include "plstat/spectra.hpp"
#include "plstat/variance_functionals.hpp"

using namespace plstat;

static void BM_WignerSpectrum(benchmark::State& state) {
  WignerSpec spec;
  spec.n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto m = sample_wigner(spec, seed++);
    benchmark::DoNotOptimize(eigenvalues_sym(m));
  }
}
BENCHMARK(BM_WignerSpectrum)->Arg(100)->Arg(300)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_SampleCovSpectrum(benchmark::State& state) {
  SampleCovSpec spec;
  spec.n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto m = sample_sample_cov(spec, seed++);
    benchmark::DoNotOptimize(eigenvalues_sym(m));
  }
}
BENCHMARK(BM_SampleCovSpectrum)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_WignerVariance(benchmark::State& state) {
  const auto& f = find_test_function("sin");
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wigner_variance(f, 3.0, 1.0, nodes));
}
BENCHMARK(BM_WignerVariance)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ScVariance(benchmark::State& state) {
  const auto& f = find_test_function("lorentz");
  for (auto _ : state) benchmark::DoNotOptimize(sc_variance(f, 3.0));
}
BENCHMARK(BM_ScVariance)->Unit(benchmark::kMillisecond);

static void BM_Quantile(benchmark::State& state) {
  const LimitLaw law = state.range(0) == 0 ? LimitLaw::semicircle() : LimitLaw::marchenko_pastur();
  double p = 0.0;
  for (auto _ : state) {
    p += 0.618033988749895;
    if (p >= 1.0) p -= 1.0;
    benchmark::DoNotOptimize(law.quantile(p));
  }
}
BENCHMARK(BM_Quantile)->Arg(0)->Arg(1);

static void BM_ClassicalLocations(benchmark::State& state) {
  const LimitLaw law = LimitLaw::marchenko_pastur();
  for (auto _ : state) benchmark::DoNotOptimize(classical_locations(law, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ClassicalLocations)->Arg(800)->Unit(benchmark::kMicrosecond);

static void BM_PartialStatistic(benchmark::State& state) {
  WignerSpec spec;
  spec.n = 400;
  const Spectrum s = eigenvalues_sym(sample_wigner(spec, 3));
  const auto& f = find_test_function("x2");
  Engine engine = make_engine(4);
  for (auto _ : state) benchmark::DoNotOptimize(partial_stat_unordered(s, f, 100, engine));
}
BENCHMARK(BM_PartialStatistic);

static void BM_SamplingStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto& g = find_test_function("x");
  Engine engine = make_engine(5);
  for (auto _ : state) benchmark::DoNotOptimize(sampling_clt_statistic(n, n / 10, g, engine));
}
BENCHMARK(BM_SamplingStatistic)->Arg(1000)->Arg(10000);
BENCHMARK_MAIN();
