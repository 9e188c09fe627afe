#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "detail.hpp"
#include "trafficast/model_io.hpp"
#include "trafficast/records.hpp"

namespace trafficast::cli {
namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("TRAFFICAST_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return detail::parse_size_list(env, "TRAFFICAST_SEED").at(0);
  } catch (const std::exception&) {
    throw UsageError(std::string("TRAFFICAST_SEED must be a non-negative integer, got '") + env + "'");
  }
}

template <typename Enum, typename Parse>
std::vector<Enum> parse_enum_list(const std::string& text, Parse parse, const std::string& what) {
  std::vector<Enum> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(what + ": " + e.what());
    }
  }
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hourly traffic volume forecasting with LSTM and GRU networks", "trafficast"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trafficast 0.1.0");

  // stats
  StatsOptions stats;
  std::string stats_columns;
  auto* stats_cmd = app.add_subcommand("stats", "Per-column statistics and outlier counts");
  stats_cmd->add_option("--data", stats.data, "Metro CSV file")->required();
  stats_cmd->add_option("--out", stats.out, "Statistics CSV to write")->required();
  stats_cmd->add_option("--outlier-columns", stats_columns, "Columns to count IQR outliers for");

  // train
  TrainOptions train;
  std::string layers, cell = "lstm", features = "all";
  std::optional<std::uint64_t> train_seed;
  std::optional<double> test_fraction;
  std::optional<std::size_t> tail_rows;
  std::string outlier_columns = "temp,rain_1h";
  std::string from_run;
  auto* train_cmd = app.add_subcommand("train", "Preprocess, train one network, write results");
  train_cmd->add_option("--data", train.data, "Metro CSV file");
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_option("--cell", cell, "lstm or gru");
  train_cmd->add_option("--lookback", train.lookback, "Hours of history per window");
  train_cmd->add_option("--horizon", train.horizon, "Hours to predict");
  train_cmd->add_option("--features", features, "all or reduced");
  train_cmd->add_option("--layers", layers, "Hidden sizes, e.g. 128,64,32,16");
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs");
  train_cmd->add_option("--batch", train.batch, "Minibatch size");
  train_cmd->add_option("--lr", train.lr, "Base learning rate");
  train_cmd->add_option("--decay", train.decay, "Learning-rate decay per step");
  train_cmd->add_option("--patience", train.patience, "Early-stopping patience in epochs");
  train_cmd->add_option("--seed", train_seed, "Seed (default: TRAFFICAST_SEED or 0)");
  train_cmd->add_option("--max-gap", train.max_gap_hours, "Largest contiguous step in hours");
  train_cmd->add_option("--train-end-year", train.train_end_year, "Last year of train+val");
  train_cmd->add_option("--val-fraction", train.val_fraction, "Validation share of train+val");
  train_cmd->add_option("--scale", train.scale, "Chronological fraction of the data to use");
  train_cmd->add_option("--test-fraction", test_fraction, "Split by position: last share is test");
  train_cmd->add_option("--tail-rows", tail_rows, "Use only the last N records");
  train_cmd->add_option("--outlier-columns", outlier_columns, "IQR-filtered columns ('' for none)");
  train_cmd->add_option("--from-run", from_run, "Repeat the run described by a run.json");

  // eval
  EvalOptions eval;
  std::string eval_features;
  auto* eval_cmd = app.add_subcommand("eval", "Score a saved model on a dataset's test split");
  eval_cmd->add_option("--model", eval.model, "model.txt from train")->required();
  eval_cmd->add_option("--data", eval.data, "Metro CSV file")->required();
  eval_cmd->add_option("--out", eval.out, "Output directory")->required();
  eval_cmd->add_option("--features", eval_features, "Override the model's feature set");

  // grid
  GridOptions grid;
  std::optional<std::uint64_t> grid_seed;
  std::string grid_cells, grid_lookbacks, grid_features, grid_settings_arg;
  auto* grid_cmd = app.add_subcommand("grid", "Run the 16-run experiment grid");
  grid_cmd->add_option("--data", grid.data, "Metro CSV file")->required();
  grid_cmd->add_option("--out", grid.out, "Output directory")->required();
  grid_cmd->add_option("--scale", grid.scale, "Chronological fraction of the data to use");
  grid_cmd->add_option("--jobs,--parallel", grid.jobs, "Runs to execute concurrently");
  grid_cmd->add_option("--seed", grid_seed, "Seed (default: TRAFFICAST_SEED or 0)");
  grid_cmd->add_option("--batch", grid.batch, "Minibatch size");
  grid_cmd->add_option("--lr", grid.lr, "Base learning rate");
  grid_cmd->add_option("--decay", grid.decay, "Learning-rate decay per step");
  grid_cmd->add_option("--patience", grid.patience, "Early-stopping patience in epochs");
  grid_cmd->add_option("--max-epochs", grid.max_epochs, "Cap on every setting's epochs");
  grid_cmd->add_option("--cells", grid_cells, "Subset of lstm,gru");
  grid_cmd->add_option("--lookbacks", grid_lookbacks, "Subset of lookbacks, default 6,24");
  grid_cmd->add_option("--feature-sets", grid_features, "Subset of all,reduced");
  grid_cmd->add_option("--settings", grid_settings_arg, "Subset of A,B");

  // synth
  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic Metro-schema CSV");
  synth_cmd->add_option("--out", synth.out, "CSV file to write")->required();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--start", synth.start, "First hour, YYYY-MM-DD HH:MM:SS");
  synth_cmd->add_option("--end", synth.end, "Last hour, YYYY-MM-DD HH:MM:SS");

  std::vector<const char*> argv{"trafficast"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*stats_cmd) {
      if (!stats_columns.empty()) {
        stats.outlier_columns.clear();
        std::stringstream ss(stats_columns);
        for (std::string c; std::getline(ss, c, ',');) stats.outlier_columns.push_back(c);
      }
      cmd_stats(stats, out);
    } else if (*train_cmd) {
      if (!from_run.empty()) {
        for (const auto* opt : train_cmd->get_options()) {
          if (opt->count() > 0 && opt->get_name() != "--from-run" && opt->get_name() != "--out" &&
              opt->get_name() != "--help") {
            throw UsageError("--from-run only combines with --out (got " + opt->get_name() + ")");
          }
        }
        const auto out_dir = train.out;
        train = load_run(from_run);
        if (!out_dir.empty()) train.out = out_dir;
      } else {
        try {
          train.cell = parse_cell_kind(cell);
          train.features = parse_feature_set(features);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        if (!layers.empty()) train.layers = detail::parse_size_list(layers, "--layers");
        train.seed = train_seed ? *train_seed : default_seed();
        train.test_fraction = test_fraction;
        train.tail_rows = tail_rows;
        train.outlier_columns.clear();
        std::stringstream ss(outlier_columns);
        for (std::string c; std::getline(ss, c, ',');) {
          if (!c.empty()) train.outlier_columns.push_back(c);
        }
      }
      cmd_train(train, out);
    } else if (*eval_cmd) {
      if (!eval_features.empty()) {
        try {
          eval.features = parse_feature_set(eval_features);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      cmd_eval(eval, out);
    } else if (*grid_cmd) {
      grid.seed = grid_seed ? *grid_seed : default_seed();
      if (!grid_cells.empty()) grid.cells = parse_enum_list<CellKind>(grid_cells, parse_cell_kind, "--cells");
      if (!grid_lookbacks.empty()) grid.lookbacks = detail::parse_size_list(grid_lookbacks, "--lookbacks");
      if (!grid_features.empty()) {
        grid.feature_sets = parse_enum_list<FeatureSet>(grid_features, parse_feature_set, "--feature-sets");
      }
      if (!grid_settings_arg.empty()) {
        grid.settings.clear();
        std::stringstream ss(grid_settings_arg);
        for (std::string s; std::getline(ss, s, ',');) grid.settings.push_back(s);
      }
      const auto rows = cmd_grid(grid, out);
      const auto failed = std::count_if(rows.begin(), rows.end(), [](const GridRow& r) { return r.status != "ok"; });
      if (failed > 0) {
        err << "trafficast: " << failed << " of " << rows.size() << " grid runs failed\n";
        return kFailure;
      }
    } else if (*synth_cmd) {
      cmd_synth(synth, out);
    }
  } catch (const UsageError& e) {
    err << "trafficast: usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "trafficast: " << e.what() << "\n";
    return kInputError;
  } catch (const CsvError& e) {
    err << "trafficast: invalid data file: " << e.what() << "\n";
    return kInputError;
  } catch (const TrainingDiverged& e) {
    err << "trafficast: training diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    err << "trafficast: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace trafficast::cli
