#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trafficast/features.hpp"
#include "trafficast/metrics.hpp"
#include "trafficast/network.hpp"
#include "trafficast/pipeline.hpp"
#include "trafficast/trainer.hpp"

namespace trafficast::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,  // missing or unreadable input file
  kDiverged = 3,
  kUsage = 64,
};

/// Bad flag values or combinations.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input file that does not exist or cannot be read.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  CellKind cell = CellKind::lstm;
  std::size_t lookback = 6;
  std::size_t horizon = 1;
  FeatureSet features = FeatureSet::all;
  std::vector<std::size_t> layers{128, 64, 32, 16};
  std::size_t epochs = 300;
  std::size_t batch = 64;
  double lr = 1e-4;
  double decay = 1e-5;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  std::size_t max_gap_hours = 1;
  int train_end_year = 2017;
  double val_fraction = 0.2;
  double scale = 1.0;
  std::optional<double> test_fraction;
  std::optional<std::size_t> tail_rows;
  std::vector<std::string> outlier_columns{"temp", "rain_1h"};

  /// Throws UsageError.
  void validate() const;
  PipelineConfig pipeline() const;
  ModelConfig model(std::size_t input_dim) const;
  TrainConfig training() const;
};

struct TrainOutcome {
  TrainResult result;
  PreparedData data;
  EvalReport test;  // original-scale metrics on the test windows
  double wall_seconds = 0.0;
};

/// Full pipeline plus training. Writes model.txt, loss_curve.csv, run.json
/// and metrics.json into opts.out.
TrainOutcome cmd_train(const TrainOptions& opts, std::ostream& log);

/// Options recorded in a run.json written by cmd_train.
TrainOptions load_run(const std::filesystem::path& run_json);

struct EvalOptions {
  std::filesystem::path model;
  std::filesystem::path data;
  std::filesystem::path out;
  /// Encode the data with this feature set instead of the model's own.
  std::optional<FeatureSet> features;
};

struct EvalOutcome {
  EvalReport report;
  std::size_t windows = 0;
};

/// Writes metrics.json and predictions.csv into opts.out.
EvalOutcome cmd_eval(const EvalOptions& opts, std::ostream& log);

struct StatsOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  std::vector<std::string> outlier_columns{"temp", "rain_1h", "snow_1h", "clouds_all",
                                           "traffic_volume"};
};

struct StatsOutcome {
  std::size_t rows_read = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t unique_rows = 0;
  Timestamp first{}, last{};
  std::vector<ColumnSummary> summary;
  std::vector<IqrBounds> bounds;
  std::vector<std::size_t> outliers_per_column;
};

/// Writes the describe CSV to opts.out and an outlier report next to it
/// (same name with "_outliers" before the extension).
StatsOutcome cmd_stats(const StatsOptions& opts, std::ostream& log);

struct GridSetting {
  std::string name;
  std::vector<std::size_t> layers;
  std::size_t epochs;
};

/// A: [128,64,32,16] for 300 epochs. B: [256,128,64,32] for 500 epochs.
const std::vector<GridSetting>& grid_settings();

struct GridOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  double scale = 1.0;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  std::size_t batch = 64;
  double lr = 1e-4;
  double decay = 1e-5;
  std::size_t patience = 5;
  /// Caps every setting's epoch budget when set.
  std::optional<std::size_t> max_epochs;
  std::vector<CellKind> cells{CellKind::lstm, CellKind::gru};
  std::vector<std::size_t> lookbacks{6, 24};
  std::vector<FeatureSet> feature_sets{FeatureSet::all, FeatureSet::reduced};
  std::vector<std::string> settings{"A", "B"};

  void validate() const;
};

struct GridRow {
  CellKind cell = CellKind::lstm;
  std::size_t lookback = 0;
  FeatureSet features = FeatureSet::all;
  std::string setting;
  EvalReport metrics;
  std::size_t epochs_ran = 0;
  double wall_seconds = 0.0;
  std::size_t train_windows = 0;
  std::string status = "ok";
};

inline constexpr const char* kGridHeader =
    "cell,lookback,features,setting,mse,mae,mape,epochs_ran,wall_seconds,status";

/// Runs every combination, each into its own subdirectory of opts.out, and
/// keeps grid_report.csv current after every finished run. A failed run is
/// recorded in its row and the rest continue.
std::vector<GridRow> cmd_grid(const GridOptions& opts, std::ostream& log);

struct SynthOptions {
  std::filesystem::path out;
  std::uint64_t seed = 7;
  std::string start = "2012-10-02 09:00:00";
  std::string end = "2018-09-30 23:00:00";
};

/// Writes a Metro-schema CSV with realistic quirks; returns the row count.
std::size_t cmd_synth(const SynthOptions& opts, std::ostream& log);

/// Parses argv-style arguments (without the program name), dispatches, and
/// maps failures to exit codes. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trafficast::cli
