#include "trafficast/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "trafficast/adam.hpp"

namespace trafficast {
namespace {

void check_compatible(const Network& net, const WindowedDataset& data, const char* which) {
  if (data.empty()) throw std::invalid_argument(std::string("train: empty ") + which + " set");
  if (data.features() != net.config().input_dim || data.horizon != net.config().horizon) {
    throw ShapeError(std::string("train: ") + which + " set has " +
                     std::to_string(data.features()) + " features / horizon " +
                     std::to_string(data.horizon) + ", network expects " +
                     std::to_string(net.config().input_dim) + " / " +
                     std::to_string(net.config().horizon));
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(base_lr > 0.0)) throw std::invalid_argument("TrainConfig: base_lr must be > 0");
  if (!(decay >= 0.0)) throw std::invalid_argument("TrainConfig: decay must be >= 0");
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (patience == 0) throw std::invalid_argument("TrainConfig: patience must be >= 1");
  if (max_epochs == 0) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
}

double lr_schedule(const TrainConfig& cfg, std::uint64_t step) {
  return cfg.base_lr / (1.0 + cfg.decay * static_cast<double>(step));
}

EarlyStopping::EarlyStopping(std::size_t patience, double min_delta)
    : patience_(patience), min_delta_(min_delta) {}

bool EarlyStopping::observe(std::size_t epoch, double loss) {
  if (best_epoch_ == 0 || loss <= best_loss_ - min_delta_) {
    best_loss_ = loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

Matrix predict(const Network& net, const WindowedDataset& data, std::size_t batch_size) {
  Matrix out(net.config().horizon, data.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const std::size_t end = std::min(data.size(), start + batch_size);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Matrix pred = predict(net, data.batch_inputs(idx));
    for (std::size_t k = 0; k < pred.rows(); ++k)
      for (std::size_t b = 0; b < pred.cols(); ++b) out(k, start + b) = pred(k, b);
  }
  return out;
}

double dataset_mse(const Network& net, const WindowedDataset& data, std::size_t batch_size) {
  const Matrix pred = predict(net, data, batch_size);
  double sum = 0.0;
  for (std::size_t s = 0; s < data.size(); ++s) {
    for (std::size_t k = 0; k < data.horizon; ++k) {
      const double r = pred(k, s) - data.targets(s, k);
      sum += r * r;
    }
  }
  return sum / static_cast<double>(data.size() * data.horizon);
}

TrainResult train(Network net, const WindowedDataset& train_set, const WindowedDataset& val_set,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  check_compatible(net, val_set, "validation");
  return train(
      std::move(net), train_set,
      [&val_set](const Network& n, std::size_t) { return dataset_mse(n, val_set); }, cfg,
      on_epoch);
}

TrainResult train(Network net, const WindowedDataset& train_set, const ValidationFn& validate,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  check_compatible(net, train_set, "training");

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  AdamState adam;
  EarlyStopping stopper(cfg.patience);
  ParameterSet best = net.params();
  TrainResult result{net, {}, 0, false, 0};

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      ForwardResult fwd = forward_sequence(net, train_set.batch_inputs(batch));
      LossAndGrad lg = mse_loss_and_grad(fwd.prediction, train_set.batch_targets(batch));
      if (!std::isfinite(lg.loss)) {
        throw TrainingDiverged("training diverged: non-finite loss in epoch " +
                               std::to_string(epoch) + " at step " +
                               std::to_string(adam.t + 1));
      }
      loss_sum += lg.loss * static_cast<double>(batch.size());
      const ParameterSet grads = backward_sequence(net, fwd.cache, lg.d_pred);
      adam_step(net.params(), grads, adam, lr_schedule(cfg, adam.t));
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(order.size());
    record.val_loss = validate(net, epoch);
    if (!std::isfinite(record.val_loss)) {
      throw TrainingDiverged("training diverged: non-finite validation loss in epoch " +
                             std::to_string(epoch));
    }
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);

    if (stopper.observe(epoch, record.val_loss)) best = net.params();
    if (stopper.should_stop()) {
      result.stopped_early = true;
      break;
    }
  }

  net.params() = std::move(best);
  result.net = std::move(net);
  result.best_epoch = stopper.best_epoch();
  result.optimizer_steps = adam.t;
  return result;
}

}  // namespace trafficast
