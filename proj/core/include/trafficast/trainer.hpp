#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trafficast/network.hpp"
#include "trafficast/windows.hpp"

namespace trafficast {

struct TrainConfig {
  double base_lr = 1e-4;
  double decay = 1e-5;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 300;
  std::size_t patience = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Time-based decay per optimizer step: base_lr / (1 + decay * step).
double lr_schedule(const TrainConfig& cfg, std::uint64_t step);

/// Tracks the best validation loss and how long it has gone unimproved.
/// An epoch improves only if it beats the best so far by at least min_delta.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience, double min_delta = 1e-12);

  /// Records one epoch's loss; returns true if it is a new best.
  bool observe(std::size_t epoch, double loss);
  bool should_stop() const noexcept { return stale_ >= patience_; }
  std::size_t best_epoch() const noexcept { return best_epoch_; }
  double best_loss() const noexcept { return best_loss_; }
  std::size_t stale_epochs() const noexcept { return stale_; }

 private:
  std::size_t patience_;
  double min_delta_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t stale_ = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  Network net;  // parameters from the best validation epoch
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
  std::uint64_t optimizer_steps = 0;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validation loss for the network after `epoch` (1-based).
using ValidationFn = std::function<double(const Network&, std::size_t epoch)>;
using EpochCallback = std::function<void(const EpochRecord&)>;

/// Minibatch Adam on scaled MSE, validation after every epoch, early
/// stopping with best-epoch restore.
TrainResult train(Network net, const WindowedDataset& train_set, const WindowedDataset& val_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Same loop with a caller-supplied validation measure.
TrainResult train(Network net, const WindowedDataset& train_set, const ValidationFn& validate,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

/// Predictions for every sample, (horizon x samples), in dataset order.
Matrix predict(const Network& net, const WindowedDataset& data, std::size_t batch_size = 256);

/// Mean squared error of the network over a dataset, in scaled units.
double dataset_mse(const Network& net, const WindowedDataset& data, std::size_t batch_size = 256);

}  // namespace trafficast
