#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "fixtures.hpp"
#include "trafficast/trainer.hpp"

using namespace trafficast;
using trafficast::testing::sine_windows;

TEST(EarlyStopping, PlateauAfterFirstEpochStopsAfterSixth) {
  EarlyStopping stop(5);
  std::size_t epoch = 0;
  while (!stop.should_stop()) {
    ++epoch;
    stop.observe(epoch, 1.0);
  }
  EXPECT_EQ(epoch, 6u);
  EXPECT_EQ(stop.best_epoch(), 1u);
}

TEST(EarlyStopping, ImprovementResetsCounterAndTinyGainsDoNotCount) {
  EarlyStopping stop(2);
  EXPECT_TRUE(stop.observe(1, 1.0));
  EXPECT_FALSE(stop.observe(2, 1.0 - 1e-13));
  EXPECT_EQ(stop.stale_epochs(), 1u);
  EXPECT_TRUE(stop.observe(3, 0.5));
  EXPECT_EQ(stop.stale_epochs(), 0u);
  EXPECT_FALSE(stop.observe(4, 0.7));
  EXPECT_FALSE(stop.should_stop());
  EXPECT_FALSE(stop.observe(5, 0.6));
  EXPECT_TRUE(stop.should_stop());
  EXPECT_EQ(stop.best_epoch(), 3u);
}

TEST(Train, ScriptedPlateauRestoresBestEpochWeights) {
  const WindowedDataset data = sine_windows(32, 4);
  Network net = Network::create({CellKind::gru, {4}, 1, 1, 3});
  TrainConfig cfg;
  cfg.base_lr = 1e-2;
  cfg.batch_size = 8;
  cfg.max_epochs = 50;

  Matrix snapshot;
  auto scripted = [&](const Network& n, std::size_t epoch) {
    if (epoch == 1) {
      snapshot = predict(n, data);
      return 0.5;
    }
    return 0.9;
  };
  const TrainResult r = train(net, data, scripted, cfg);
  EXPECT_EQ(r.history.size(), 6u);
  EXPECT_EQ(r.best_epoch, 1u);
  EXPECT_TRUE(r.stopped_early);
  EXPECT_EQ(predict(r.net, data), snapshot);
}

TEST(Train, MaxEpochsBoundsHistory) {
  const WindowedDataset data = sine_windows(16, 3);
  TrainConfig cfg;
  cfg.max_epochs = 1;
  const TrainResult r = train(Network::create({CellKind::lstm, {2}, 1, 1, 0}), data, data, cfg);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.history[0].epoch, 1u);
  EXPECT_EQ(r.optimizer_steps, 1u);
}

TEST(Train, LastBatchMayBeSmaller) {
  const WindowedDataset data = sine_windows(10, 3);
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.batch_size = 4;
  const TrainResult r = train(Network::create({CellKind::lstm, {2}, 1, 1, 0}), data, data, cfg);
  EXPECT_EQ(r.optimizer_steps, 6u);  // 3 batches (4, 4, 2) per epoch
}

TEST(Train, DeterministicUnderFixedSeed) {
  const WindowedDataset data = sine_windows(40, 5);
  TrainConfig cfg;
  cfg.max_epochs = 8;
  cfg.batch_size = 16;
  cfg.base_lr = 5e-3;
  cfg.seed = 99;
  const Network net = Network::create({CellKind::lstm, {5, 3}, 1, 1, 12});
  const TrainResult a = train(net, data, data, cfg);
  const TrainResult b = train(net, data, data, cfg);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
    EXPECT_EQ(a.history[i].val_loss, b.history[i].val_loss);
  }
  EXPECT_EQ(a.net, b.net);
}

TEST(Train, BestEpochHasMinimumValidationLoss) {
  const WindowedDataset train_set = sine_windows(48, 6);
  const WindowedDataset val_set = sine_windows(16, 6, 24.0, 5.0);
  TrainConfig cfg;
  cfg.max_epochs = 40;
  cfg.batch_size = 16;
  cfg.base_lr = 1e-2;
  cfg.patience = 3;
  const TrainResult r = train(Network::create({CellKind::gru, {6}, 1, 1, 4}), train_set, val_set, cfg);
  const auto best = std::min_element(r.history.begin(), r.history.end(),
                                     [](const auto& a, const auto& b) { return a.val_loss < b.val_loss; });
  EXPECT_EQ(best->epoch, r.best_epoch);
  EXPECT_NEAR(dataset_mse(r.net, val_set), best->val_loss, 1e-15);
}

TEST(Train, ConstantTargetIsLearned) {
  std::vector<std::vector<double>> rows(40, std::vector<double>{0.3});
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = {0.3 + 0.01 * static_cast<double>(i % 5), 0.3};
  FeatureFrame frame = trafficast::testing::hourly_frame({"x", "traffic_volume"}, rows);
  const WindowedDataset data = make_windows(frame, WindowConfig{4, 1, 1});
  TrainConfig cfg;
  cfg.base_lr = 1e-2;
  cfg.decay = 0.0;
  cfg.batch_size = 4;
  cfg.max_epochs = 500;
  cfg.patience = 500;
  const TrainResult r = train(Network::create({CellKind::lstm, {3}, 2, 1, 1}), data, data, cfg);
  EXPECT_LT(dataset_mse(r.net, data), 1e-6);
}

TEST(Train, RejectsEmptyOrMismatchedData) {
  const WindowedDataset data = sine_windows(8, 3);
  WindowedDataset empty = data.subset(std::vector<std::size_t>{});
  const Network net = Network::create({CellKind::lstm, {2}, 1, 1, 0});
  EXPECT_THROW(train(net, empty, data, TrainConfig{}), std::invalid_argument);
  EXPECT_THROW(train(net, data, empty, TrainConfig{}), std::invalid_argument);
  const Network wide = Network::create({CellKind::lstm, {2}, 3, 1, 0});
  EXPECT_THROW(train(wide, data, data, TrainConfig{}), ShapeError);
}

TEST(Train, NonFiniteLossAborts) {
  WindowedDataset data = sine_windows(8, 3);
  data.targets(0, 0) = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.max_epochs = 2;
  EXPECT_THROW(train(Network::create({CellKind::gru, {2}, 1, 1, 0}), data, data, cfg),
               TrainingDiverged);
}

TEST(Predict, BatchEqualsPerSample) {
  const WindowedDataset data = sine_windows(9, 4);
  const Network net = Network::create({CellKind::lstm, {3, 2}, 1, 1, 8});
  const Matrix all = predict(net, data, 4);
  for (std::size_t s = 0; s < data.size(); ++s) {
    const std::size_t idx[] = {s};
    EXPECT_EQ(predict(net, data.batch_inputs(idx))(0, 0), all(0, s));
  }
  EXPECT_EQ(predict(net, data, 4), predict(net, data, 100));
}
