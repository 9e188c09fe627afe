#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "detail.hpp"
#include "trafficast/io.hpp"
#include "trafficast/model_io.hpp"
#include "trafficast/records.hpp"
#include "trafficast/synthetic.hpp"

namespace trafficast::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const fs::path& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw InputError(std::string(what) + " not found: " + path.string());
  }
}

RawTable read_table(const fs::path& path) {
  require_file(path, "data file");
  try {
    return parse_csv(path);
  } catch (const CsvError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("cannot read " + path.string() + ": " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Flattens (horizon x samples) predictions to sample-major order, matching
/// the row-major (samples x horizon) target matrix.
std::vector<double> flatten_predictions(const Matrix& pred) {
  std::vector<double> out;
  out.reserve(pred.size());
  for (std::size_t s = 0; s < pred.cols(); ++s)
    for (std::size_t h = 0; h < pred.rows(); ++h) out.push_back(pred(h, s));
  return out;
}

std::vector<double> flat(const Matrix& m) { return {m.values().begin(), m.values().end()}; }

EvalReport score(const Network& net, const WindowedDataset& data, const ScalerParams& scaler) {
  const auto pred = flatten_predictions(predict(net, data));
  return evaluate(pred, flat(data.targets), scaler);
}

std::string loss_curve_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (const auto& e : history) {
    out += std::to_string(e.epoch) + ',' + format_double(e.train_loss) + ',' +
           format_double(e.val_loss) + '\n';
  }
  return out;
}

TrainOutcome train_on_records(const TrainOptions& opts, const std::vector<RawRecord>& records,
                              std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  PreparedData d = prepare(records, opts.pipeline());
  log << "windows: train " << d.train.size() << ", val " << d.val.size() << ", test "
      << d.test.size() << " (" << d.train.features() << " features)\n";
  if (d.test.empty()) throw EmptyDatasetError("no test windows");

  const Network net = Network::create(opts.model(d.train.features()));
  TrainResult result = train(net, d.train, d.val, opts.training(), [&](const EpochRecord& e) {
    log << "epoch " << e.epoch << "/" << opts.epochs << "  train " << format_double(e.train_loss)
        << "  val " << format_double(e.val_loss) << '\n';
  });
  const EvalReport test = score(result.net, d.test, d.scaler);
  TrainOutcome outcome{std::move(result), std::move(d), test, 0.0};

  const auto& r = outcome.result;
  const auto& data = outcome.data;
  ensure_dir(opts.out);
  save_model(r.net, opts.out / "model.txt", detail::model_metadata(opts, data.scaler));
  write_file_atomic(opts.out / "loss_curve.csv", loss_curve_csv(r.history));

  json run;
  run["config"] = detail::to_json(opts);
  run["split"] = detail::to_json(data.sizes);
  run["features"] = data.train.feature_names;
  run["result"] = {{"epochs_ran", r.history.size()},
                   {"best_epoch", r.best_epoch},
                   {"stopped_early", r.stopped_early},
                   {"optimizer_steps", r.optimizer_steps},
                   {"best_val_loss", r.history.at(r.best_epoch - 1).val_loss}};
  write_file_atomic(opts.out / "run.json", dump(run));
  write_file_atomic(opts.out / "metrics.json", dump(detail::to_json(outcome.test)));

  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  log << "best epoch " << r.best_epoch << " of " << r.history.size() << "; test MSE "
      << outcome.test.mse << ", MAE " << outcome.test.mae << ", MAPE " << outcome.test.mape * 100
      << "%\n";
  return outcome;
}

std::string csv_safe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

std::string grid_report_csv(const std::vector<GridRow>& rows, const std::vector<bool>& done) {
  std::string out = std::string(kGridHeader) + "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!done[i]) continue;
    const auto& r = rows[i];
    const bool ok = r.status == "ok";
    auto num = [&](double v) { return ok ? format_double(v) : std::string(); };
    std::ostringstream wall;
    wall.precision(3);
    wall << std::fixed << r.wall_seconds;
    out += std::string(to_string(r.cell)) + ',' + std::to_string(r.lookback) + ',' +
           std::string(to_string(r.features)) + ',' + r.setting + ',' + num(r.metrics.mse) + ',' +
           num(r.metrics.mae) + ',' + num(r.metrics.mape) + ',' + std::to_string(r.epochs_ran) +
           ',' + wall.str() + ',' + csv_safe(r.status) + '\n';
  }
  return out;
}

}  // namespace

TrainOutcome cmd_train(const TrainOptions& opts, std::ostream& log) {
  opts.validate();
  const RawTable table = read_table(opts.data);
  log << "read " << table.rows_read << " rows (" << table.duplicates_dropped
      << " duplicate timestamps dropped)\n";
  return train_on_records(opts, table.records, log);
}

TrainOptions load_run(const fs::path& run_json) {
  require_file(run_json, "run file");
  json j;
  try {
    j = json::parse(read_file(run_json));
  } catch (const json::exception& e) {
    throw UsageError("cannot parse " + run_json.string() + ": " + e.what());
  }
  if (!j.contains("config")) throw UsageError(run_json.string() + " has no config section");
  return detail::train_options_from_json(j["config"]);
}

EvalOutcome cmd_eval(const EvalOptions& opts, std::ostream& log) {
  if (opts.model.empty() || opts.data.empty() || opts.out.empty()) {
    throw UsageError("eval needs --model, --data and --out");
  }
  require_file(opts.model, "model file");
  const ModelFile model = load_model(opts.model);
  PipelineConfig cfg = detail::pipeline_from_metadata(model);
  if (opts.features) cfg.feature_set = *opts.features;
  const ScalerParams scaler = detail::scaler_from_metadata(model);

  const RawTable table = read_table(opts.data);
  const WindowedDataset test = prepare_test(table.records, cfg, scaler);
  if (test.features() != model.net.config().input_dim) {
    throw FeatureMismatchError("model input_dim " + std::to_string(model.net.config().input_dim) +
                               " but data has " + std::to_string(test.features()) + " features");
  }

  const Matrix pred = predict(model.net, test);
  EvalOutcome outcome;
  outcome.windows = test.size();
  outcome.report = evaluate(flatten_predictions(pred), flat(test.targets), scaler);

  std::string csv = "timestamp,actual,predicted\n";
  for (std::size_t s = 0; s < test.size(); ++s) {
    for (std::size_t h = 0; h < test.horizon; ++h) {
      const Timestamp ts = test.target_timestamps[s] + std::chrono::hours(static_cast<long>(h));
      csv += format_timestamp(ts) + ',' + format_double(inverse_target(test.targets(s, h), scaler)) +
             ',' + format_double(inverse_target(pred(h, s), scaler)) + '\n';
    }
  }
  ensure_dir(opts.out);
  write_file_atomic(opts.out / "predictions.csv", csv);
  write_file_atomic(opts.out / "metrics.json", dump(detail::to_json(outcome.report)));
  log << "evaluated " << outcome.windows << " windows: MSE " << outcome.report.mse << ", MAE "
      << outcome.report.mae << ", MAPE " << outcome.report.mape * 100 << "%\n";
  return outcome;
}

StatsOutcome cmd_stats(const StatsOptions& opts, std::ostream& log) {
  if (opts.data.empty() || opts.out.empty()) throw UsageError("stats needs --data and --out");
  const RawTable table = read_table(opts.data);
  const FeatureFrame frame = encode(table.records, FeatureSet::all);

  StatsOutcome s;
  s.rows_read = table.rows_read;
  s.duplicates_dropped = table.duplicates_dropped;
  s.unique_rows = table.records.size();
  s.first = frame.timestamps.front();
  s.last = frame.timestamps.back();
  s.summary = describe(frame);
  // Each column on its own, so the counts are what filtering that column alone would drop.
  for (const auto& col : opts.outlier_columns) {
    const IqrResult r = iqr_filter(frame, {col});
    s.bounds.push_back(r.bounds.front());
    s.outliers_per_column.push_back(r.removed_per_column.front());
  }

  std::string report = "column,q1,q3,lower,upper,outliers\n";
  for (std::size_t i = 0; i < s.bounds.size(); ++i) {
    const auto& b = s.bounds[i];
    report += b.column + ',' + format_double(b.q1) + ',' + format_double(b.q3) + ',' +
              format_double(b.lower) + ',' + format_double(b.upper) + ',' +
              std::to_string(s.outliers_per_column[i]) + '\n';
  }

  if (opts.out.has_parent_path()) ensure_dir(opts.out.parent_path());
  write_file_atomic(opts.out, describe_csv(s.summary));
  fs::path outliers = opts.out;
  outliers.replace_filename(opts.out.stem().string() + "_outliers" + opts.out.extension().string());
  write_file_atomic(outliers, report);

  log << "rows_read " << s.rows_read << "\n"
      << "duplicates_dropped " << s.duplicates_dropped << "\n"
      << "unique_rows " << s.unique_rows << "\n"
      << "first " << format_timestamp(s.first) << "\n"
      << "last " << format_timestamp(s.last) << "\n";
  for (std::size_t i = 0; i < s.bounds.size(); ++i) {
    log << "outliers " << s.bounds[i].column << ' ' << s.outliers_per_column[i] << "\n";
  }
  return s;
}

const std::vector<GridSetting>& grid_settings() {
  static const std::vector<GridSetting> settings{{"A", {128, 64, 32, 16}, 300},
                                                 {"B", {256, 128, 64, 32}, 500}};
  return settings;
}

void GridOptions::validate() const {
  if (data.empty() || out.empty()) throw UsageError("grid needs --data and --out");
  if (!(scale > 0.0 && scale <= 1.0)) throw UsageError("--scale must be in (0, 1]");
  if (jobs == 0) throw UsageError("--jobs must be >= 1");
  if (max_epochs && *max_epochs == 0) throw UsageError("--max-epochs must be >= 1");
  for (const auto& s : settings) {
    const auto& all = grid_settings();
    if (std::none_of(all.begin(), all.end(), [&](const GridSetting& g) { return g.name == s; })) {
      throw UsageError("unknown grid setting '" + s + "'");
    }
  }
}

std::vector<GridRow> cmd_grid(const GridOptions& opts, std::ostream& log) {
  opts.validate();
  const RawTable table = read_table(opts.data);
  ensure_dir(opts.out);

  struct Job {
    GridRow row;
    TrainOptions train;
  };
  std::vector<Job> jobs;
  for (CellKind cell : opts.cells) {
    for (std::size_t lookback : opts.lookbacks) {
      for (FeatureSet features : opts.feature_sets) {
        for (const auto& name : opts.settings) {
          const auto& all = grid_settings();
          const auto& setting = *std::find_if(all.begin(), all.end(),
                                              [&](const GridSetting& g) { return g.name == name; });
          Job job;
          job.row.cell = cell;
          job.row.lookback = lookback;
          job.row.features = features;
          job.row.setting = name;
          TrainOptions& t = job.train;
          t.data = fs::absolute(opts.data);
          t.out = opts.out / "runs" /
                  (std::string(to_string(cell)) + "_l" + std::to_string(lookback) + "_" +
                   std::string(to_string(features)) + "_" + name);
          t.cell = cell;
          t.lookback = lookback;
          t.features = features;
          t.layers = setting.layers;
          t.epochs = opts.max_epochs ? std::min(*opts.max_epochs, setting.epochs) : setting.epochs;
          t.batch = opts.batch;
          t.lr = opts.lr;
          t.decay = opts.decay;
          t.patience = opts.patience;
          t.seed = opts.seed;
          t.scale = opts.scale;
          jobs.push_back(std::move(job));
        }
      }
    }
  }

  std::vector<GridRow> rows;
  for (const auto& j : jobs) rows.push_back(j.row);
  std::vector<bool> done(jobs.size(), false);
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto started = std::chrono::steady_clock::now();
      GridRow row = jobs[i].row;
      std::ostringstream run_log;
      try {
        jobs[i].train.validate();
        const TrainOutcome o = train_on_records(jobs[i].train, table.records, run_log);
        row.metrics = o.test;
        row.epochs_ran = o.result.history.size();
        row.train_windows = o.data.train.size();
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        run_log << row.status << '\n';
      }
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      try {
        ensure_dir(jobs[i].train.out);
        write_file_atomic(jobs[i].train.out / "train.log", run_log.str());
      } catch (const std::exception&) {
        // the report row still records the outcome
      }

      std::lock_guard lock(mu);
      rows[i] = row;
      done[i] = true;
      write_file_atomic(opts.out / "grid_report.csv", grid_report_csv(rows, done));
      log << "[" << std::count(done.begin(), done.end(), true) << "/" << jobs.size() << "] "
          << to_string(row.cell) << " l=" << row.lookback << " " << to_string(row.features) << " "
          << row.setting << ": " << row.status;
      if (row.status == "ok") log << ", MAE " << row.metrics.mae << ", epochs " << row.epochs_ran;
      log << " (" << row.wall_seconds << " s)" << std::endl;
    }
  };

  const std::size_t n_threads = std::min(opts.jobs, jobs.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::size_t cmd_synth(const SynthOptions& opts, std::ostream& log) {
  if (opts.out.empty()) throw UsageError("synth needs --out");
  SyntheticConfig cfg;
  cfg.seed = opts.seed;
  cfg.start = opts.start;
  cfg.end = opts.end;
  std::vector<RawRecord> rows;
  try {
    rows = generate_metro_like(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ostringstream csv;
  write_csv(csv, rows);
  if (opts.out.has_parent_path()) ensure_dir(opts.out.parent_path());
  write_file_atomic(opts.out, csv.str());
  log << "wrote " << rows.size() << " rows to " << opts.out.string() << "\n";
  return rows.size();
}

}  // namespace trafficast::cli
