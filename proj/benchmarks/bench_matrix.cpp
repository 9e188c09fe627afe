#include <benchmark/benchmark.h>

#include <random>

#include "trafficast/matrix.hpp"

using namespace trafficast;

namespace {

Matrix random(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  Matrix m(r, c);
  for (double& v : m.values()) v = d(rng);
  return m;
}

// W (hidden x hidden+input) times a batch of concatenated states.
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto batch = static_cast<std::size_t>(state.range(1));
  const Matrix w = random(n, n + 13, 1), x = random(n + 13, batch, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(w, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n + 13) * batch));
}
BENCHMARK(BM_Matmul)->Args({16, 64})->Args({64, 64})->Args({128, 64})->Args({256, 64})->Args({128, 1});

void BM_MatmulBt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix d = random(n, 64, 1), c = random(n + 13, 64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_bt(d, c));
}
BENCHMARK(BM_MatmulBt)->Arg(32)->Arg(128)->Arg(256);

void BM_MatmulAt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix w = random(n, n + 13, 1), d = random(n, 64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_at(w, d));
}
BENCHMARK(BM_MatmulAt)->Arg(32)->Arg(128)->Arg(256);

void BM_Sigmoid(benchmark::State& state) {
  const Matrix m = random(128, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(map_fn(m, Activation::sigmoid));
}
BENCHMARK(BM_Sigmoid);

}  // namespace
