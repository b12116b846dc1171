// Serial reference kernels against their OpenMP counterparts.
// Run with e.g. OMP_NUM_THREADS=8 ./rot_bench --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include <random>

#include "rot/experiments.hpp"
#include "rot/measures.hpp"
#include "rot/ot_nd.hpp"
#include "rot/parallel.hpp"
#include "rot/serial.hpp"
#include "rot/sliced.hpp"

namespace {

struct Clouds {
  rot::SampleMatrix x, y;
  std::vector<rot::Direction> dirs;
};

Clouds make_clouds(std::size_t n, std::size_t d, std::size_t k) {
  std::mt19937_64 rng(42);
  std::vector<double> lo(d, 0.0), hi(d, 1.0), lo2(d, 0.5), hi2(d, 1.5);
  auto x = rot::sample_box(n, lo, hi, rng);
  auto y = rot::sample_box(n, lo2, hi2, rng);
  return {std::move(x), std::move(y), rot::sample_sphere(d, k, rot::SeedPolicy(7))};
}

void BM_sliced_serial(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 3, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::serial::avg_sliced_wp(c.x, c.y, 2.0, c.dirs));
}

void BM_sliced_parallel(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 3, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::avg_sliced_wp(c.x, c.y, 2.0, c.dirs).value);
  st.counters["threads"] = rot::max_threads();
}

void BM_variance_vp_serial(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 2, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::serial::variance_vp(c.x, c.y, 2.0, c.dirs).v2);
}

void BM_variance_vp_parallel(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 2, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::variance_vp(c.x, c.y, 2.0, c.dirs).v2);
  st.counters["threads"] = rot::max_threads();
}

void BM_v1_sign_serial(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 2, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::serial::variance_v1_sign(c.x, c.y, c.dirs).v2);
}

void BM_v1_sign_parallel(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 2, static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(rot::variance_v1_sign(c.x, c.y, c.dirs).v2);
  st.counters["threads"] = rot::max_threads();
}

void BM_cost_serial(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 3, 1);
  for (auto _ : st) benchmark::DoNotOptimize(rot::serial::pairwise_cost(c.x, c.y, 2.0)(0, 0));
}

void BM_cost_parallel(benchmark::State& st) {
  const auto c = make_clouds(static_cast<std::size_t>(st.range(0)), 3, 1);
  for (auto _ : st) benchmark::DoNotOptimize(rot::pairwise_cost(c.x, c.y, 2.0)(0, 0));
  st.counters["threads"] = rot::max_threads();
}

}  // namespace

BENCHMARK(BM_sliced_serial)->Args({2000, 300})->Args({20000, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sliced_parallel)->Args({2000, 300})->Args({20000, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_variance_vp_serial)->Args({2000, 300})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_variance_vp_parallel)->Args({2000, 300})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_v1_sign_serial)->Args({2000, 50})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_v1_sign_parallel)->Args({2000, 50})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cost_serial)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cost_parallel)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
