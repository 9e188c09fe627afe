#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trafficast/features.hpp"
#include "trafficast/preprocess.hpp"
#include "trafficast/records.hpp"
#include "trafficast/windows.hpp"

namespace trafficast {

/// Raised when data encodes to different feature columns than a model expects.
class FeatureMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PipelineConfig {
  FeatureSet feature_set = FeatureSet::all;
  WindowConfig window;
  std::vector<std::string> outlier_columns{"temp", "rain_1h"};
  int train_end_year = 2017;
  double val_fraction = 0.2;
  /// Keep only this chronological fraction of the data: the tail of the
  /// train+val years and the head of the test years, so the two stay adjacent.
  double scale = 1.0;
  /// When set, split by position instead of by year: the last test_fraction
  /// of rows is the test set.
  std::optional<double> test_fraction;
  /// When set, only the last tail_rows records are used.
  std::optional<std::size_t> tail_rows;

  void validate() const;
};

struct SplitSizes {
  std::size_t rows_total = 0;
  std::size_t train_rows = 0;
  std::size_t val_rows = 0;
  std::size_t test_rows = 0;
  std::size_t outliers_removed = 0;
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  std::size_t test_windows = 0;
};

struct PreparedData {
  ScalerParams scaler;
  std::vector<IqrBounds> outlier_bounds;
  WindowedDataset train, val, test;
  SplitSizes sizes;
};

/// Chronological split into train/val/test after applying scale and tail.
Split partition(const FeatureFrame& frame, const PipelineConfig& cfg);

/// encode -> split -> outlier filter (train+val only) -> fit scaler on train
/// -> transform -> windows.
PreparedData prepare(const std::vector<RawRecord>& records, const PipelineConfig& cfg);

/// Test-split windows scaled with a previously fitted scaler. Throws
/// FeatureMismatchError if the encoded columns differ from the scaler's.
WindowedDataset prepare_test(const std::vector<RawRecord>& records, const PipelineConfig& cfg,
                             const ScalerParams& scaler);

}  // namespace trafficast
