#include <benchmark/benchmark.h>

#include <random>

#include "trafficast/network.hpp"

using namespace trafficast;

namespace {

std::vector<Matrix> window(std::size_t steps, std::size_t features, std::size_t batch) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0, 1);
  std::vector<Matrix> w;
  for (std::size_t t = 0; t < steps; ++t) {
    Matrix m(features, batch);
    for (double& v : m.values()) v = d(rng);
    w.push_back(std::move(m));
  }
  return w;
}

// One minibatch of the grid's settings: args are cell, setting (0 = A, 1 = B), lookback.
void BM_TrainStep(benchmark::State& state) {
  const auto cell = state.range(0) == 0 ? CellKind::lstm : CellKind::gru;
  const std::vector<std::size_t> layers = state.range(1) == 0 ? std::vector<std::size_t>{128, 64, 32, 16}
                                                             : std::vector<std::size_t>{256, 128, 64, 32};
  const auto steps = static_cast<std::size_t>(state.range(2));
  const Network net = Network::create({cell, layers, 13, 1, 0});
  const auto w = window(steps, 13, 64);
  const Matrix target(1, 64, 0.5);
  for (auto _ : state) {
    auto fwd = forward_sequence(net, w);
    const auto loss = mse_loss_and_grad(fwd.prediction, target);
    benchmark::DoNotOptimize(backward_sequence(net, fwd.cache, loss.d_pred));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_TrainStep)
    ->ArgsProduct({{0, 1}, {0, 1}, {6, 24}})
    ->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const Network net = Network::create({CellKind::lstm, {128, 64, 32, 16}, 13, 1, 0});
  const auto w = window(static_cast<std::size_t>(state.range(0)), 13, 256);
  for (auto _ : state) benchmark::DoNotOptimize(predict(net, w));
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_Predict)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace
