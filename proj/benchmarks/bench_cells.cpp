#include <benchmark/benchmark.h>

#include <random>

#include "trafficast/gru.hpp"
#include "trafficast/lstm.hpp"

using namespace trafficast;

namespace {

Matrix input(std::size_t features, std::size_t batch) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0, 1);
  Matrix m(features, batch);
  for (double& v : m.values()) v = d(rng);
  return m;
}

void BM_LstmStep(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  const auto p = lstm_init(13, hidden, 1);
  const Matrix x = input(13, 64);
  const auto prev = CellState::zeros(hidden, 64, true);
  for (auto _ : state) benchmark::DoNotOptimize(lstm_step(p, x, prev));
}
BENCHMARK(BM_LstmStep)->Arg(16)->Arg(64)->Arg(128)->Arg(256);

void BM_LstmBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  const auto p = lstm_init(13, hidden, 1);
  const auto step = lstm_step(p, input(13, 64), CellState::zeros(hidden, 64, true));
  const Matrix d_h(hidden, 64, 0.01), d_c(hidden, 64, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(lstm_backward(p, step.cache, d_h, d_c));
}
BENCHMARK(BM_LstmBackward)->Arg(16)->Arg(128)->Arg(256);

void BM_GruStep(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  const auto p = gru_init(13, hidden, 1);
  const Matrix x = input(13, 64);
  const auto prev = CellState::zeros(hidden, 64, false);
  for (auto _ : state) benchmark::DoNotOptimize(gru_step(p, x, prev));
}
BENCHMARK(BM_GruStep)->Arg(16)->Arg(64)->Arg(128)->Arg(256);

void BM_GruBackward(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  const auto p = gru_init(13, hidden, 1);
  const auto step = gru_step(p, input(13, 64), CellState::zeros(hidden, 64, false));
  const Matrix d_h(hidden, 64, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(gru_backward(p, step.cache, d_h));
}
BENCHMARK(BM_GruBackward)->Arg(16)->Arg(128)->Arg(256);

}  // namespace
