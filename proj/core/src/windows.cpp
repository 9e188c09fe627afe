#include "trafficast/windows.hpp"

#include <algorithm>
#include <chrono>

namespace trafficast {

void WindowConfig::validate() const {
  if (lookback == 0) throw std::invalid_argument("WindowConfig: lookback must be >= 1");
  if (horizon == 0) throw std::invalid_argument("WindowConfig: horizon must be >= 1");
  if (max_gap_hours == 0) throw std::invalid_argument("WindowConfig: max_gap_hours must be >= 1");
}

std::vector<Matrix> WindowedDataset::batch_inputs(std::span<const std::size_t> samples) const {
  std::vector<Matrix> steps(lookback, Matrix(features(), samples.size()));
  for (std::size_t b = 0; b < samples.size(); ++b) {
    const Matrix& window = inputs.at(samples[b]);
    for (std::size_t t = 0; t < lookback; ++t) {
      for (std::size_t f = 0; f < window.cols(); ++f) steps[t](f, b) = window(t, f);
    }
  }
  return steps;
}

Matrix WindowedDataset::batch_targets(std::span<const std::size_t> samples) const {
  Matrix out(horizon, samples.size());
  for (std::size_t b = 0; b < samples.size(); ++b) {
    for (std::size_t k = 0; k < horizon; ++k) out(k, b) = targets(samples[b], k);
  }
  return out;
}

WindowedDataset WindowedDataset::subset(std::span<const std::size_t> samples) const {
  WindowedDataset out;
  out.feature_names = feature_names;
  out.lookback = lookback;
  out.horizon = horizon;
  out.targets = Matrix(samples.size(), horizon);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t s = samples[i];
    out.inputs.push_back(inputs.at(s));
    out.target_timestamps.push_back(target_timestamps.at(s));
    for (std::size_t k = 0; k < horizon; ++k) out.targets(i, k) = targets(s, k);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(
    std::span<const Timestamp> timestamps, std::size_t max_gap_hours) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  if (timestamps.empty()) return runs;
  const auto max_gap = std::chrono::hours(static_cast<long>(max_gap_hours));
  std::size_t begin = 0;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    const auto step = timestamps[i] - timestamps[i - 1];
    if (step <= std::chrono::seconds(0) || step > max_gap) {
      runs.emplace_back(begin, i);
      begin = i;
    }
  }
  runs.emplace_back(begin, timestamps.size());
  return runs;
}

std::size_t window_count(std::size_t run_length, std::size_t lookback, std::size_t horizon) {
  return run_length >= lookback + horizon ? run_length - lookback - horizon + 1 : 0;
}

WindowedDataset make_windows(const FeatureFrame& frame, const WindowConfig& cfg) {
  cfg.validate();
  WindowedDataset ds;
  ds.feature_names = frame.columns;
  ds.lookback = cfg.lookback;
  ds.horizon = cfg.horizon;
  const std::size_t nf = frame.columns.size();

  std::vector<double> targets;
  for (const auto& [begin, end] : contiguous_runs(frame.timestamps, cfg.max_gap_hours)) {
    const std::size_t n = window_count(end - begin, cfg.lookback, cfg.horizon);
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t first = begin + w;
      Matrix window(cfg.lookback, nf);
      for (std::size_t t = 0; t < cfg.lookback; ++t) {
        std::copy(frame.values.row(first + t).begin(), frame.values.row(first + t).end(),
                  window.row(t).begin());
      }
      ds.inputs.push_back(std::move(window));
      const std::size_t target_row = first + cfg.lookback;
      for (std::size_t k = 0; k < cfg.horizon; ++k) {
        targets.push_back(frame.values(target_row + k, frame.target_col));
      }
      ds.target_timestamps.push_back(frame.timestamps[target_row]);
    }
  }
  if (ds.inputs.empty()) {
    throw EmptyDatasetError("make_windows: no contiguous run holds lookback " +
                            std::to_string(cfg.lookback) + " + horizon " +
                            std::to_string(cfg.horizon) + " rows");
  }
  ds.targets = Matrix(ds.inputs.size(), cfg.horizon, std::move(targets));
  return ds;
}

}  // namespace trafficast
