#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trafficast/features.hpp"
#include "trafficast/matrix.hpp"
#include "trafficast/records.hpp"

namespace trafficast {

class EmptyDatasetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WindowConfig {
  std::size_t lookback = 6;
  std::size_t horizon = 1;
  /// Largest step between neighbouring timestamps, in hours, that still
  /// counts as contiguous.
  std::size_t max_gap_hours = 1;

  void validate() const;
};

/// Supervised samples cut from contiguous hourly runs.
struct WindowedDataset {
  std::vector<std::string> feature_names;
  std::size_t lookback = 0;
  std::size_t horizon = 0;
  /// One (lookback x features) matrix per sample, oldest step first.
  std::vector<Matrix> inputs;
  /// samples x horizon, scaled target values.
  Matrix targets;
  /// Timestamp of each sample's first target hour.
  std::vector<Timestamp> target_timestamps;

  std::size_t size() const noexcept { return inputs.size(); }
  std::size_t features() const noexcept { return feature_names.size(); }
  bool empty() const noexcept { return inputs.empty(); }

  /// `lookback` matrices of (features x batch) for the chosen samples.
  std::vector<Matrix> batch_inputs(std::span<const std::size_t> samples) const;
  /// (horizon x batch) targets for the chosen samples.
  Matrix batch_targets(std::span<const std::size_t> samples) const;
  WindowedDataset subset(std::span<const std::size_t> samples) const;
};

/// Half-open [begin, end) row ranges whose neighbouring timestamps are at
/// most max_gap_hours apart.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(
    std::span<const Timestamp> timestamps, std::size_t max_gap_hours);

/// Windows a run of `run_length` rows yields: max(0, m - l - f + 1).
std::size_t window_count(std::size_t run_length, std::size_t lookback, std::size_t horizon);

/// Throws EmptyDatasetError when no run is long enough for a single window.
WindowedDataset make_windows(const FeatureFrame& frame, const WindowConfig& cfg);

}  // namespace trafficast
