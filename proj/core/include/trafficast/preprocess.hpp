#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trafficast/features.hpp"

namespace trafficast {

/// Linear-interpolation quantile of ascending `sorted` at position q (n - 1).
double quantile(std::span<const double> sorted, double q);

struct IqrBounds {
  std::string column;
  double q1 = 0, q3 = 0;
  double lower = 0, upper = 0;
};

/// [Q1 - 1.5 IQR, Q3 + 1.5 IQR] for each named column of `frame`.
std::vector<IqrBounds> iqr_bounds(const FeatureFrame& frame, const std::vector<std::string>& columns);

struct IqrResult {
  FeatureFrame frame;
  /// Rows outside the bounds of each column, in the order columns were given.
  /// A row outside several bounds counts once per column but is dropped once.
  std::vector<std::size_t> removed_per_column;
  std::size_t rows_removed = 0;
  std::vector<IqrBounds> bounds;
};

/// Drops every row outside the bounds of any listed column. Bounds are
/// computed once, from the frame as given.
IqrResult iqr_filter(const FeatureFrame& frame, const std::vector<std::string>& columns);
/// Same row rule with bounds supplied by the caller.
IqrResult apply_iqr_bounds(const FeatureFrame& frame, const std::vector<IqrBounds>& bounds);

struct Split {
  FeatureFrame train, val, test;
};

/// Chronological split: years <= train_end_year go to train+val, with the
/// latest `val_fraction` of those rows as validation; later years are test.
/// Throws std::invalid_argument if any part comes out empty.
Split split(const FeatureFrame& frame, int train_end_year = 2017, double val_fraction = 0.2);

/// Per-column min/max fitted on training rows.
struct ScalerParams {
  std::vector<std::string> columns;
  std::vector<double> min;
  std::vector<double> max;
  std::size_t target_col = 0;

  friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

ScalerParams fit_scaler(const FeatureFrame& train);
/// x' = (x - min) / (max - min), or 0 for constant columns.
FeatureFrame transform(const FeatureFrame& frame, const ScalerParams& params);
std::vector<double> inverse_target(std::span<const double> scaled, const ScalerParams& params);
double inverse_target(double scaled, const ScalerParams& params);

}  // namespace trafficast
