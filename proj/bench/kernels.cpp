#include <benchmark/benchmark.h>

#include <random>

#include "gdsr/convolve.hpp"
#include "gdsr/dct.hpp"
#include "gdsr/feature_bank.hpp"
#include "gdsr/parallel.hpp"
#include "gdsr/pipeline.hpp"
#include "gdsr/resample.hpp"
#include "gdsr/spectral.hpp"

using namespace gdsr;

namespace {

Image2D noise(std::size_t m, std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Image2D img(m, n);
  for (double& v : img.samples()) v = d(rng);
  return img;
}

void BM_DctFast(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const DctPlan plan(n, n, DctDirection::forward, DctPath::fast);
  const Image2D x = noise(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(plan.execute(x));
}

void BM_DctNaive(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const DctPlan plan(n, n, DctDirection::forward, DctPath::naive);
  const Image2D x = noise(n, n);
  for (auto _ : st) benchmark::DoNotOptimize(plan.execute(x));
}

void BM_ConvolveParallel(benchmark::State& st) {
  const Image2D x = noise(384, 512);
  const Stencil s = stencils::gaussian(2.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(convolve_reflect(x, s));
}

void BM_ConvolveSerial(benchmark::State& st) {
  const Image2D x = noise(384, 512);
  const Stencil s = stencils::gaussian(2.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(convolve_reflect_serial(x, s));
}

void BM_SolveSpectral(benchmark::State& st) {
  const Image2D e = noise(384, 512);
  const SpectralSymbol sym = derived_symbol(LaplacianKernel(), 384, 512);
  for (auto _ : st) benchmark::DoNotOptimize(solve_screened(e, 1.0, sym));
}

void BM_SolveCg(benchmark::State& st) {
  const Image2D e = noise(96, 128);
  for (auto _ : st) benchmark::DoNotOptimize(cg_solve(e, 1.0, LaplacianKernel(), 1e-8, 100000));
}

void BM_SolveSpectralSmall(benchmark::State& st) {
  const Image2D e = noise(96, 128);
  const SpectralSymbol sym = derived_symbol(LaplacianKernel(), 96, 128);
  for (auto _ : st) benchmark::DoNotOptimize(solve_screened(e, 1.0, sym));
}

void BM_FeatureSr(benchmark::State& st) {
  const Image2D up = bicubic_upsample(noise(48, 64), ScaleFactor(8));
  const Image2D guide = noise(384, 512);
  FeatureDomainModel model;
  model.lambdas.assign(model.bank.size(), 1.0);
  model.head = ReconstructionHead::select(model.bank.size());
  for (auto _ : st) benchmark::DoNotOptimize(feature_domain_sr(up, guide, model));
}

}  // namespace

BENCHMARK(BM_DctFast)->Arg(64)->Arg(256)->Arg(384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DctNaive)->Arg(64)->Arg(256)->Arg(384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveParallel)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveSerial)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSpectral)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSpectralSmall)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveCg)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeatureSr)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  parallel::set_threads(parallel::threads_from_environment());
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
