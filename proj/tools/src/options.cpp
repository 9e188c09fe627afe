#include <charconv>
#include <sstream>

#include "detail.hpp"
#include "trafficast/io.hpp"

namespace trafficast::cli {

using nlohmann::json;

void TrainOptions::validate() const {
  if (lookback == 0) throw UsageError("--lookback must be >= 1");
  if (horizon == 0) throw UsageError("--horizon must be >= 1");
  if (layers.empty()) throw UsageError("--layers needs at least one size");
  for (auto s : layers) {
    if (s == 0) throw UsageError("--layers sizes must be >= 1");
  }
  if (epochs == 0) throw UsageError("--epochs must be >= 1");
  if (batch == 0) throw UsageError("--batch must be >= 1");
  if (!(lr > 0.0)) throw UsageError("--lr must be > 0");
  if (!(decay >= 0.0)) throw UsageError("--decay must be >= 0");
  if (max_gap_hours == 0) throw UsageError("--max-gap must be >= 1");
  if (out.empty()) throw UsageError("--out is required");
  if (data.empty()) throw UsageError("--data is required");
  try {
    pipeline().validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

PipelineConfig TrainOptions::pipeline() const {
  PipelineConfig p;
  p.feature_set = features;
  p.window = WindowConfig{lookback, horizon, max_gap_hours};
  p.outlier_columns = outlier_columns;
  p.train_end_year = train_end_year;
  p.val_fraction = val_fraction;
  p.scale = scale;
  p.test_fraction = test_fraction;
  p.tail_rows = tail_rows;
  return p;
}

ModelConfig TrainOptions::model(std::size_t input_dim) const {
  return ModelConfig{cell, layers, input_dim, horizon, seed};
}

TrainConfig TrainOptions::training() const {
  TrainConfig t;
  t.base_lr = lr;
  t.decay = decay;
  t.batch_size = batch;
  t.max_epochs = epochs;
  t.patience = patience;
  t.seed = seed;
  return t;
}

namespace detail {

json to_json(const TrainOptions& o) {
  json j;
  j["data"] = o.data.string();
  j["out"] = o.out.string();
  j["cell"] = std::string(to_string(o.cell));
  j["lookback"] = o.lookback;
  j["horizon"] = o.horizon;
  j["features"] = std::string(to_string(o.features));
  j["layers"] = o.layers;
  j["epochs"] = o.epochs;
  j["batch"] = o.batch;
  j["lr"] = o.lr;
  j["decay"] = o.decay;
  j["patience"] = o.patience;
  j["seed"] = o.seed;
  j["max_gap_hours"] = o.max_gap_hours;
  j["train_end_year"] = o.train_end_year;
  j["val_fraction"] = o.val_fraction;
  j["scale"] = o.scale;
  j["test_fraction"] = o.test_fraction ? json(*o.test_fraction) : json(nullptr);
  j["tail_rows"] = o.tail_rows ? json(*o.tail_rows) : json(nullptr);
  j["outlier_columns"] = o.outlier_columns;
  return j;
}

TrainOptions train_options_from_json(const json& j) {
  TrainOptions o;
  try {
    o.data = j.at("data").get<std::string>();
    o.out = j.at("out").get<std::string>();
    o.cell = parse_cell_kind(j.at("cell").get<std::string>());
    o.lookback = j.at("lookback").get<std::size_t>();
    o.horizon = j.at("horizon").get<std::size_t>();
    o.features = parse_feature_set(j.at("features").get<std::string>());
    o.layers = j.at("layers").get<std::vector<std::size_t>>();
    o.epochs = j.at("epochs").get<std::size_t>();
    o.batch = j.at("batch").get<std::size_t>();
    o.lr = j.at("lr").get<double>();
    o.decay = j.at("decay").get<double>();
    o.patience = j.at("patience").get<std::size_t>();
    o.seed = j.at("seed").get<std::uint64_t>();
    o.max_gap_hours = j.at("max_gap_hours").get<std::size_t>();
    o.train_end_year = j.at("train_end_year").get<int>();
    o.val_fraction = j.at("val_fraction").get<double>();
    o.scale = j.at("scale").get<double>();
    if (!j.at("test_fraction").is_null()) o.test_fraction = j["test_fraction"].get<double>();
    if (!j.at("tail_rows").is_null()) o.tail_rows = j["tail_rows"].get<std::size_t>();
    o.outlier_columns = j.at("outlier_columns").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("run config: ") + e.what());
  }
  return o;
}

json to_json(const SplitSizes& s) {
  return json{{"rows_total", s.rows_total},       {"train_rows", s.train_rows},
              {"val_rows", s.val_rows},           {"test_rows", s.test_rows},
              {"outliers_removed", s.outliers_removed}, {"train_windows", s.train_windows},
              {"val_windows", s.val_windows},     {"test_windows", s.test_windows}};
}

json to_json(const EvalReport& r) {
  return json{{"mse", r.mse},   {"mae", r.mae}, {"mape", r.mape}, {"mape_percent", r.mape * 100.0},
              {"n", r.n},       {"epsilon", r.epsilon}};
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double x : v) s.push_back(format_double(x));
  return join(s);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_double_strict(s));
  return out;
}

std::size_t parse_size(const std::string& text, const std::string& what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw std::invalid_argument(what + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& s : split_list(text)) {
    try {
      out.push_back(parse_size(s, what));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

ModelMetadata model_metadata(const TrainOptions& o, const ScalerParams& s) {
  ModelMetadata m{
      {"features", std::string(to_string(o.features))},
      {"lookback", std::to_string(o.lookback)},
      {"max_gap_hours", std::to_string(o.max_gap_hours)},
      {"train_end_year", std::to_string(o.train_end_year)},
      {"val_fraction", format_double(o.val_fraction)},
      {"scale", format_double(o.scale)},
      {"test_fraction", o.test_fraction ? format_double(*o.test_fraction) : ""},
      {"tail_rows", o.tail_rows ? std::to_string(*o.tail_rows) : ""},
      {"outlier_columns", join(o.outlier_columns)},
      {"scaler.columns", join(s.columns)},
      {"scaler.min", join_doubles(s.min)},
      {"scaler.max", join_doubles(s.max)},
      {"scaler.target_col", std::to_string(s.target_col)},
  };
  return m;
}

PipelineConfig pipeline_from_metadata(const ModelFile& model) {
  try {
    PipelineConfig p;
    p.feature_set = parse_feature_set(model.meta("features"));
    p.window = WindowConfig{parse_size(model.meta("lookback"), "lookback"), model.net.config().horizon,
                            parse_size(model.meta("max_gap_hours"), "max_gap_hours")};
    p.train_end_year = std::stoi(model.meta("train_end_year"));
    p.val_fraction = parse_double_strict(model.meta("val_fraction"));
    p.scale = parse_double_strict(model.meta("scale"));
    if (const auto& tf = model.meta("test_fraction"); !tf.empty()) p.test_fraction = parse_double_strict(tf);
    if (const auto& tr = model.meta("tail_rows"); !tr.empty()) p.tail_rows = parse_size(tr, "tail_rows");
    p.outlier_columns = split_list(model.meta("outlier_columns"));
    return p;
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelFormatError(std::string("model preprocessing metadata: ") + e.what());
  }
}

ScalerParams scaler_from_metadata(const ModelFile& model) {
  ScalerParams s;
  try {
    s.columns = split_list(model.meta("scaler.columns"));
    s.min = parse_doubles(model.meta("scaler.min"));
    s.max = parse_doubles(model.meta("scaler.max"));
    s.target_col = parse_size(model.meta("scaler.target_col"), "scaler.target_col");
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelFormatError(std::string("model scaler metadata: ") + e.what());
  }
  if (s.min.size() != s.columns.size() || s.max.size() != s.columns.size() ||
      s.target_col >= s.columns.size()) {
    throw ModelFormatError("model scaler metadata is inconsistent");
  }
  return s;
}

}  // namespace detail
}  // namespace trafficast::cli
