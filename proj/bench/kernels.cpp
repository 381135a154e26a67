// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP versions.
#include <benchmark/benchmark.h>

#include <random>

#include "nhssh/correlation.hpp"
#include "nhssh/matrix.hpp"
#include "nhssh/model.hpp"

using namespace nhssh;

namespace {

BigMatrix random_matrix(std::size_t n, Precision p) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  BigMatrix m(n, n, p);
  for (auto& z : m.entries()) z = BigComplex(BigReal::from_double(dist(rng), p), BigReal::from_double(dist(rng), p));
  return m;
}

void BM_matmul_serial(benchmark::State& state) {
  const Precision p{static_cast<int>(state.range(1))};
  const BigMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), p);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matmul_serial(a, a));
}

void BM_matmul_parallel(benchmark::State& state) {
  const Precision p{static_cast<int>(state.range(1))};
  const BigMatrix a = random_matrix(static_cast<std::size_t>(state.range(0)), p);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matmul_parallel(a, a));
}

std::vector<SymbolG> grid(int L, int digits) {
  return symbols_on_grid(ModelParams::from_strings("0.5", "1", "1.5", "1e-7", L, 40, Precision{digits}));
}

void BM_momentum_sum_serial(benchmark::State& state) {
  const auto symbols = grid(static_cast<int>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::momentum_sum_serial(symbols, -20, 20));
}

void BM_momentum_sum_parallel(benchmark::State& state) {
  const auto symbols = grid(static_cast<int>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::momentum_sum_parallel(symbols, -20, 20, 32));
}

}  // namespace

BENCHMARK(BM_matmul_serial)->Args({40, 100})->Args({40, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matmul_parallel)->Args({40, 100})->Args({40, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_momentum_sum_serial)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_momentum_sum_parallel)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
