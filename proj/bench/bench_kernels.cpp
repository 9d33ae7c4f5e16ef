// Serial reference (jobs = 1) against the OpenMP kernels. The second
// argument of each benchmark is the job count.

#include "fracequiv/experiments.hpp"
#include "fracequiv/nhbasis.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

#include <algorithm>

using namespace fracequiv;

namespace {

void BM_BiorthMatrix(benchmark::State& state) {
  static const BasisTable table = build_basis_table(0.7, 40);
  const auto K = static_cast<std::size_t>(state.range(0));
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(biorth_matrix(table, K, 256, jobs));
}

void BM_KernelGrid(benchmark::State& state) {
  static const BasisTable table = build_basis_table(0.3, 5000);
  std::vector<double> grid(10);
  for (int i = 0; i < 10; ++i) grid[i] = (i + 1) / 10.0;
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_parseval_grid(table, grid, grid, 0, jobs));
}

void BM_WeightedMean(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weighted_mean_experiment(0.8, 1024, 1000, 1, 0.0, jobs));
}

void BM_RateExperiment(benchmark::State& state) {
  const std::vector<std::size_t> grid{256, 1024, 4096};
  RateOptions o;
  o.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rate_experiment(0.7, 1.0, 1.0, grid, 50, 1, o));
}

int max_jobs() { return std::max(2, omp_get_max_threads()); }

}  // namespace

BENCHMARK(BM_BiorthMatrix)->ArgsProduct({{10, 20}, {1, max_jobs()}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelGrid)->Arg(1)->Arg(max_jobs())->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightedMean)->Arg(1)->Arg(max_jobs())->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateExperiment)->Arg(1)->Arg(max_jobs())->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
