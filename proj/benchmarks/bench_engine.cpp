#include <benchmark/benchmark.h>

#include "noonbell/chsh.hpp"

using namespace noonbell;

namespace {

void BM_QTable(benchmark::State& state) {
  const FockCutoff cut(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(q_table(cut, 0.465));
}
BENCHMARK(BM_QTable)->Arg(20)->Arg(40)->Arg(60);

void BM_DampProductForm(benchmark::State& state) {
  const FockCutoff cut(static_cast<int>(state.range(0)));
  const ProductFormDensity psi = ProductFormDensity::amplified_noon(Gain(0.189), cut);
  for (auto _ : state)
    benchmark::DoNotOptimize(damp_product_form_separable(psi, cut.nmax, 0.2, 0.2));
}
BENCHMARK(BM_DampProductForm)->Arg(20)->Arg(40);

void BM_BellValue(benchmark::State& state) {
  const FockCutoff cut(40);
  const LossyEnsemble ens = prepare_lossy_noon(Gain(0.189), LossParams{0.95, 0.8, 0.95}, cut);
  for (auto _ : state) benchmark::DoNotOptimize(bell_value(ens, Thresholds(0, 0.465)));
}
BENCHMARK(BM_BellValue);

void BM_OptimizeThresholds(benchmark::State& state) {
  const FockCutoff cut(40);
  const LossyEnsemble ens = prepare_lossy_noon(Gain(0.189), LossParams{}, cut);
  QFactorCache cache;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_thresholds(ens, {}, &cache));
}
BENCHMARK(BM_OptimizeThresholds);

void BM_DenseAmplitudeDamp(benchmark::State& state) {
  const FockCutoff cut(static_cast<int>(state.range(0)));
  const TwoModeDensity rho = TwoModeDensity::from_pure(amplified_noon(Gain(0.189), cut));
  for (auto _ : state) benchmark::DoNotOptimize(amplitude_damp(rho, 0.2, 0.2));
}
BENCHMARK(BM_DenseAmplitudeDamp)->Arg(10)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
