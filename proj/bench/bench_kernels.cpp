// Serial reference vs OpenMP kernels on identical inputs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ticklab/ncpp.hpp"
#include "ticklab/pipeline.hpp"
#include "ticklab/scaling.hpp"
#include "ticklab/seasonality.hpp"
#include "ticklab/waitstats.hpp"

namespace {

using namespace ticklab;

const std::vector<double>& exponential_sample() {
  static const std::vector<double> z = [] {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(2'000'000);
    for (auto& x : v) x = e(rng);
    return v;
  }();
  return z;
}

const std::vector<double>& normal_sample() {
  static const std::vector<double> r = [] {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z(0.0, 1e-3);
    std::vector<double> v(4'000'000);
    for (auto& x : v) x = z(rng);
    return v;
  }();
  return r;
}

const SeasonalProfile& profile() {
  static const SeasonalProfile p = synthetic_profile(SyntheticSpec{}, 3);
  return p;
}

const std::vector<TickSeries>& days() {
  static const std::vector<TickSeries> d = simulate(profile(), 4, 32).days;
  return d;
}

void BM_AdSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::anderson_darling_unit_exponential(exponential_sample()));
}
void BM_AdParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(anderson_darling_unit_exponential(exponential_sample()));
}

void BM_BinsSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::bin_counts(normal_sample(), 1e-5, 1000, 2001));
}
void BM_BinsParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(bin_counts(normal_sample(), 1e-5, 1000, 2001));
}

void BM_SimulateSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::simulate(profile(), 5, 16));
}
void BM_SimulateParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(simulate(profile(), 5, 16));
}

void BM_ProfileSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::intraday_profile(days(), 300.0));
}
void BM_ProfileParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(intraday_profile(days(), 300.0));
}

}  // namespace

BENCHMARK(BM_AdSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AdParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProfileSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProfileParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
