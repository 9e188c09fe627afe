#include "trafficast/pipeline.hpp"

#include <cmath>

namespace trafficast {
namespace {

std::size_t scaled_count(std::size_t n, double fraction) {
  return std::min(n, static_cast<std::size_t>(std::ceil(static_cast<double>(n) * fraction)));
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  window.validate();
  if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must be in (0, 1]");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must be in (0, 1)");
  }
  if (test_fraction && !(*test_fraction > 0.0 && *test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must be in (0, 1)");
  }
  if (tail_rows && *tail_rows == 0) throw std::invalid_argument("tail_rows must be >= 1");
}

Split partition(const FeatureFrame& full, const PipelineConfig& cfg) {
  FeatureFrame frame = full;
  if (cfg.tail_rows && *cfg.tail_rows < frame.rows()) {
    frame = frame.slice(frame.rows() - *cfg.tail_rows, frame.rows());
  }

  std::size_t boundary = 0;
  if (cfg.test_fraction) {
    const auto n_test =
        static_cast<std::size_t>(std::llround(static_cast<double>(frame.rows()) * *cfg.test_fraction));
    boundary = frame.rows() - std::min(n_test, frame.rows());
  } else {
    while (boundary < frame.rows() && year_of(frame.timestamps[boundary]) <= cfg.train_end_year) {
      ++boundary;
    }
  }

  if (cfg.scale < 1.0) {
    const std::size_t keep_head = scaled_count(boundary, cfg.scale);
    const std::size_t keep_test = scaled_count(frame.rows() - boundary, cfg.scale);
    frame = frame.slice(boundary - keep_head, boundary)
                .concat(frame.slice(boundary, boundary + keep_test));
    boundary = keep_head;
  }

  if (!cfg.test_fraction) return split(frame, cfg.train_end_year, cfg.val_fraction);

  // Positional split: validation is the tail of everything before the test block.
  const FeatureFrame trainval = frame.slice(0, boundary);
  const auto n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(trainval.rows()) * cfg.val_fraction));
  Split s;
  s.train = trainval.slice(0, trainval.rows() - n_val);
  s.val = trainval.slice(trainval.rows() - n_val, trainval.rows());
  s.test = frame.slice(boundary, frame.rows());
  if (s.train.rows() == 0 || s.val.rows() == 0 || s.test.rows() == 0) {
    throw std::invalid_argument("partition: a split came out empty");
  }
  return s;
}

PreparedData prepare(const std::vector<RawRecord>& records, const PipelineConfig& cfg) {
  cfg.validate();
  const FeatureFrame frame = encode(records, cfg.feature_set);
  Split parts = partition(frame, cfg);

  PreparedData out;
  out.sizes.rows_total = frame.rows();
  std::size_t removed = 0;
  if (!cfg.outlier_columns.empty()) {
    // Bounds come from train+val together; test rows are left untouched.
    out.outlier_bounds = iqr_bounds(parts.train.concat(parts.val), cfg.outlier_columns);
    auto train = apply_iqr_bounds(parts.train, out.outlier_bounds);
    auto val = apply_iqr_bounds(parts.val, out.outlier_bounds);
    removed = train.rows_removed + val.rows_removed;
    parts.train = std::move(train.frame);
    parts.val = std::move(val.frame);
  }
  if (parts.train.rows() == 0 || parts.val.rows() == 0) {
    throw std::invalid_argument("prepare: outlier filtering emptied a split");
  }

  out.scaler = fit_scaler(parts.train);
  out.train = make_windows(transform(parts.train, out.scaler), cfg.window);
  out.val = make_windows(transform(parts.val, out.scaler), cfg.window);
  out.test = make_windows(transform(parts.test, out.scaler), cfg.window);

  out.sizes.train_rows = parts.train.rows();
  out.sizes.val_rows = parts.val.rows();
  out.sizes.test_rows = parts.test.rows();
  out.sizes.outliers_removed = removed;
  out.sizes.train_windows = out.train.size();
  out.sizes.val_windows = out.val.size();
  out.sizes.test_windows = out.test.size();
  return out;
}

WindowedDataset prepare_test(const std::vector<RawRecord>& records, const PipelineConfig& cfg,
                             const ScalerParams& scaler) {
  cfg.validate();
  const FeatureFrame frame = encode(records, cfg.feature_set);
  if (frame.columns != scaler.columns) {
    throw FeatureMismatchError("model expects features [" + join(scaler.columns) +
                               "] but data encodes to [" + join(frame.columns) + "]");
  }
  const Split parts = partition(frame, cfg);
  return make_windows(transform(parts.test, scaler), cfg.window);
}

}  // namespace trafficast
