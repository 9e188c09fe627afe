#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trafficast/matrix.hpp"
#include "trafficast/records.hpp"

namespace trafficast {

enum class FeatureSet { all, reduced };

std::string_view to_string(FeatureSet set) noexcept;
/// Accepts "all" or "reduced"; throws std::invalid_argument otherwise.
FeatureSet parse_feature_set(std::string_view text);

inline constexpr std::string_view kTargetColumn = "traffic_volume";

/// Numeric feature table: one row per hourly record.
struct FeatureFrame {
  std::vector<std::string> columns;
  std::vector<Timestamp> timestamps;
  Matrix values;  // rows = records, cols = columns
  std::size_t target_col = 0;

  std::size_t rows() const noexcept { return timestamps.size(); }
  /// Throws std::invalid_argument for unknown names.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::size_t c) const;

  /// Rows [begin, end) in order.
  FeatureFrame slice(std::size_t begin, std::size_t end) const;
  FeatureFrame select_rows(std::span<const std::size_t> rows) const;
  /// Rows of `other` appended after this frame's rows; columns must agree.
  FeatureFrame concat(const FeatureFrame& other) const;
};

/// `reduced`: temp, rain_1h, clouds_all, traffic_volume.
/// `all`: temp, rain_1h, snow_1h, clouds_all, holiday_flag, one-hot
/// weather_main (alphabetical categories seen in the data), hour_sin,
/// hour_cos, dow_sin, dow_cos, traffic_volume.
FeatureFrame encode(const std::vector<RawRecord>& records, FeatureSet set);

struct ColumnSummary {
  std::string column;
  std::size_t count = 0;
  double mean = 0, std = 0, min = 0, q25 = 0, q50 = 0, q75 = 0, max = 0;
};

/// Population std; quantiles by linear interpolation.
std::vector<ColumnSummary> describe(const FeatureFrame& frame);
std::string describe_csv(const std::vector<ColumnSummary>& summary);

}  // namespace trafficast
