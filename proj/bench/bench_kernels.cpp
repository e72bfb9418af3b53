// Serial reference against OpenMP kernels for the Monte Carlo loops.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "zipfkit/gof.hpp"
#include "zipfkit/reedsim.hpp"
#include "zipfkit/tail.hpp"
#include "zipfkit/zipf.hpp"

namespace {

using namespace zipfkit;

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

std::vector<double> pareto_values(std::size_t n, double alpha, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& x : out) x = std::pow(1.0 - unif(eng), -1.0 / alpha);
  return out;
}

void BM_Bootstrap(benchmark::State& state) {
  const TailSample sample(pareto_values(943, 1.0, 1), 1.0);
  const auto fit = fit_alpha_mle(sample);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_pvalue(sample, fit, GofStatistic::cvm_w2, 1000, 7, exec_of(state)));
  }
}
BENCHMARK(BM_Bootstrap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_LmzTable(benchmark::State& state) {
  const std::size_t sizes[] = {10, 30, 100};
  const double levels[] = {0.05, 0.10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lmz_critical_table(sizes, levels, 20000, 3, exec_of(state)));
  }
}
BENCHMARK(BM_LmzTable)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ReedSimulation(benchmark::State& state) {
  ReedConfig cfg;
  cfg.p = 0.05;
  cfg.n_firms = 200000;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg, exec_of(state)));
}
BENCHMARK(BM_ReedSimulation)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_KsScan(benchmark::State& state) {
  const auto values = pareto_values(20000, 1.2, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_xmin(values, KsScanXmin{}, exec_of(state)));
  }
}
BENCHMARK(BM_KsScan)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
