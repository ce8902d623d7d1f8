#include <benchmark/benchmark.h>

#include <vector>

#include "darksra/histogram.hpp"
#include "darksra/random.hpp"
#include "darksra/simulator.hpp"
#include "darksra/sra.hpp"

namespace {

darksra::IntervalSeries exponential_series(std::size_t n) {
  darksra::Rng rng(7);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.exponential(1e-3);
  return darksra::IntervalSeries(std::move(v));
}

void BM_FitPoissonSra(benchmark::State& state) {
  const auto series = exponential_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(darksra::fit_poisson_sra(series));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitPoissonSra)->Arg(1'000)->Arg(10'000)->Arg(100'000);

void BM_Simulate(benchmark::State& state) {
  darksra::SimConfig c;
  c.afterpulse_prob = 0.3;
  c.detrap_tau = 2e-6;
  c.holdoff = 1e-6;
  c.target_counts = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(darksra::simulate(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1'001)->Arg(100'001);

void BM_HistogramFit(benchmark::State& state) {
  const auto series = exponential_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto bins = darksra::default_binning(series);
    benchmark::DoNotOptimize(darksra::fit_exponential_histogram(
        darksra::build_histogram(series, bins.bin_width, bins.range_max)));
  }
}
BENCHMARK(BM_HistogramFit)->Arg(10'000)->Arg(1'000'000);

}  // namespace

BENCHMARK_MAIN();
