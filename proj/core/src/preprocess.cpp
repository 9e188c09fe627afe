#include "trafficast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trafficast {

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<IqrBounds> iqr_bounds(const FeatureFrame& frame,
                                  const std::vector<std::string>& columns) {
  std::vector<IqrBounds> out;
  for (const auto& name : columns) {
    const std::size_t c = frame.column_index(name);
    std::vector<double> v = frame.column(c);
    if (v.empty()) throw std::invalid_argument("iqr_bounds: empty frame");
    std::sort(v.begin(), v.end());
    IqrBounds b;
    b.column = name;
    b.q1 = quantile(v, 0.25);
    b.q3 = quantile(v, 0.75);
    const double iqr = b.q3 - b.q1;
    b.lower = b.q1 - 1.5 * iqr;
    b.upper = b.q3 + 1.5 * iqr;
    out.push_back(b);
  }
  return out;
}

IqrResult apply_iqr_bounds(const FeatureFrame& frame, const std::vector<IqrBounds>& bounds) {
  IqrResult result;
  result.bounds = bounds;
  result.removed_per_column.assign(bounds.size(), 0);
  std::vector<std::size_t> cols;
  for (const auto& b : bounds) cols.push_back(frame.column_index(b.column));

  std::vector<std::size_t> keep;
  keep.reserve(frame.rows());
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    bool drop = false;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      const double v = frame.values(r, cols[k]);
      if (v < bounds[k].lower || v > bounds[k].upper) {
        ++result.removed_per_column[k];
        drop = true;
      }
    }
    if (!drop) keep.push_back(r);
  }
  result.rows_removed = frame.rows() - keep.size();
  result.frame = frame.select_rows(keep);
  return result;
}

IqrResult iqr_filter(const FeatureFrame& frame, const std::vector<std::string>& columns) {
  return apply_iqr_bounds(frame, iqr_bounds(frame, columns));
}

Split split(const FeatureFrame& frame, int train_end_year, double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("split: val_fraction must be in [0, 1)");
  }
  // Rows are chronological, so the train+val block is a prefix.
  std::size_t boundary = 0;
  while (boundary < frame.rows() && year_of(frame.timestamps[boundary]) <= train_end_year) ++boundary;
  for (std::size_t r = boundary; r < frame.rows(); ++r) {
    if (year_of(frame.timestamps[r]) <= train_end_year) {
      throw std::invalid_argument("split: frame is not sorted by timestamp");
    }
  }
  const auto n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(boundary) * val_fraction));
  const std::size_t n_train = boundary - n_val;

  Split s;
  s.train = frame.slice(0, n_train);
  s.val = frame.slice(n_train, boundary);
  s.test = frame.slice(boundary, frame.rows());
  if (s.train.rows() == 0) throw std::invalid_argument("split: empty training split");
  if (s.val.rows() == 0) throw std::invalid_argument("split: empty validation split");
  if (s.test.rows() == 0) throw std::invalid_argument("split: empty test split");
  return s;
}

ScalerParams fit_scaler(const FeatureFrame& train) {
  if (train.rows() == 0) throw std::invalid_argument("fit_scaler: empty frame");
  ScalerParams p;
  p.columns = train.columns;
  p.target_col = train.target_col;
  for (std::size_t c = 0; c < train.columns.size(); ++c) {
    const auto v = train.column(c);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    p.min.push_back(*lo);
    p.max.push_back(*hi);
  }
  return p;
}

FeatureFrame transform(const FeatureFrame& frame, const ScalerParams& params) {
  if (params.columns != frame.columns || params.min.size() != frame.columns.size() ||
      params.max.size() != frame.columns.size()) {
    throw std::invalid_argument("transform: scaler columns do not match frame columns");
  }
  FeatureFrame out = frame;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.values.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double range = params.max[c] - params.min[c];
      row[c] = range > 0 ? (row[c] - params.min[c]) / range : 0.0;
    }
  }
  return out;
}

double inverse_target(double scaled, const ScalerParams& params) {
  if (params.target_col >= params.min.size() || params.target_col >= params.max.size()) {
    throw std::invalid_argument("inverse_target: scaler holds no target column");
  }
  const double lo = params.min[params.target_col];
  const double hi = params.max[params.target_col];
  return scaled * (hi - lo) + lo;
}

std::vector<double> inverse_target(std::span<const double> scaled, const ScalerParams& params) {
  std::vector<double> out;
  out.reserve(scaled.size());
  for (double v : scaled) out.push_back(inverse_target(v, params));
  return out;
}

}  // namespace trafficast
