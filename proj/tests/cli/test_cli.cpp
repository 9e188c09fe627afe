#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "trafficast/io.hpp"
#include "trafficast/records.hpp"
#include "trafficast_cli/commands.hpp"

namespace fs = std::filesystem;
using namespace trafficast;
using trafficast::testing::TempDir;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

/// Three months around the year boundary, so every split has rows.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir;
    data_ = (*dir_ / "metro.csv").string();
    const auto r = invoke({"synth", "--out", data_, "--seed", "5", "--start", "2017-11-15 00:00:00",
                           "--end", "2018-01-20 23:00:00"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  std::vector<std::string> small_train(const std::string& out) const {
    return {"train", "--data",   data_, "--out",  out,  "--layers", "4,3", "--epochs",
            "3",     "--batch", "32",  "--seed", "11", "--lr",     "0.01"};
  }

  static TempDir* dir_;
  static std::string data_;
  TempDir scratch_;
};

TempDir* CliTest::dir_ = nullptr;
std::string CliTest::data_;

}  // namespace

TEST_F(CliTest, MissingDataFileExitsTwo) {
  const auto r = invoke({"stats", "--data", "/no/such/metro.csv", "--out", (scratch_ / "s.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/no/such/metro.csv"), std::string::npos) << r.err;
  const auto t = invoke({"train", "--data", "/no/such/metro.csv", "--out", scratch_.path().string()});
  EXPECT_EQ(t.code, 2);
}

TEST_F(CliTest, UsageErrors) {
  auto bad = small_train((scratch_ / "x").string());
  bad.insert(bad.end(), {"--lookback", "0"});
  const auto r = invoke(bad);
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("lookback"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"train", "--data", data_, "--out", "o", "--cell", "rnn"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"train", "--data", data_, "--out", "o", "--layers", "4,x"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"train", "--data", data_, "--out", "o", "--scale", "0"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"bogus"}).code, cli::kUsage);
  EXPECT_EQ(invoke({}).code, cli::kUsage);
}

TEST_F(CliTest, TrainWritesArtifactsAndIsDeterministic) {
  const auto a = scratch_ / "a", b = scratch_ / "b";
  ASSERT_EQ(invoke(small_train(a.string())).code, 0);
  ASSERT_EQ(invoke(small_train(b.string())).code, 0);
  for (const char* f : {"model.txt", "loss_curve.csv", "run.json", "metrics.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
  }
  EXPECT_EQ(read_file(a / "loss_curve.csv"), read_file(b / "loss_curve.csv"));
  EXPECT_EQ(read_file(a / "model.txt"), read_file(b / "model.txt"));

  const auto curve = lines(read_file(a / "loss_curve.csv"));
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve[0], "epoch,train_loss,val_loss");
  EXPECT_EQ(curve[1].substr(0, 2), "1,");

  const auto run = nlohmann::json::parse(read_file(a / "run.json"));
  EXPECT_EQ(run["config"]["layers"], nlohmann::json::array({4, 3}));
  EXPECT_EQ(run["config"]["seed"], 11);
  EXPECT_GT(run["split"]["train_windows"].get<int>(), 0);
  EXPECT_GT(run["split"]["test_windows"].get<int>(), 0);
  EXPECT_EQ(run["result"]["epochs_ran"], 3);

  for (const auto& e : fs::directory_iterator(a)) {
    EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos) << e.path();
  }
}

TEST_F(CliTest, DefaultsFollowTheTable) {
  const cli::TrainOptions o;
  EXPECT_EQ(o.layers, (std::vector<std::size_t>{128, 64, 32, 16}));
  EXPECT_EQ(o.epochs, 300u);
  EXPECT_EQ(o.batch, 64u);
  EXPECT_EQ(o.lr, 1e-4);
  EXPECT_EQ(o.cell, CellKind::lstm);
}

TEST_F(CliTest, RunJsonReproducesTheRun) {
  const auto a = scratch_ / "a", b = scratch_ / "b";
  ASSERT_EQ(invoke(small_train(a.string())).code, 0);
  const auto r = invoke({"train", "--from-run", (a / "run.json").string(), "--out", b.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(a / "loss_curve.csv"), read_file(b / "loss_curve.csv"));
  EXPECT_EQ(read_file(a / "model.txt"), read_file(b / "model.txt"));
  EXPECT_EQ(invoke({"train", "--from-run", (a / "run.json").string(), "--epochs", "9"}).code,
            cli::kUsage);
}

TEST_F(CliTest, SeedFromEnvironment) {
  ::setenv("TRAFFICAST_SEED", "123", 1);
  const auto a = scratch_ / "a";
  auto args = small_train(a.string());
  args.resize(args.size() - 4);  // drop --seed and --lr
  const auto r = invoke(args);
  ::unsetenv("TRAFFICAST_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(read_file(a / "run.json"))["config"]["seed"], 123);
}

TEST_F(CliTest, EvalWritesAlignedPredictions) {
  const auto m = scratch_ / "m", e = scratch_ / "e";
  ASSERT_EQ(invoke(small_train(m.string())).code, 0);
  const auto r = invoke({"eval", "--model", (m / "model.txt").string(), "--data", data_, "--out", e.string()});
  ASSERT_EQ(r.code, 0) << r.err;

  const auto run = nlohmann::json::parse(read_file(m / "run.json"));
  const auto metrics = nlohmann::json::parse(read_file(e / "metrics.json"));
  const auto rows = lines(read_file(e / "predictions.csv"));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "timestamp,actual,predicted");
  EXPECT_EQ(rows.size() - 1, run["split"]["test_windows"].get<std::size_t>());
  EXPECT_EQ(metrics["n"].get<std::size_t>(), rows.size() - 1);
  for (const char* k : {"mse", "mae", "mape"}) {
    EXPECT_TRUE(std::isfinite(metrics[k].get<double>())) << k;
  }
  // same numbers as the metrics train computed on the test windows
  EXPECT_EQ(metrics, nlohmann::json::parse(read_file(m / "metrics.json")));

  Timestamp prev{};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Timestamp t = parse_timestamp(rows[i].substr(0, 19));
    if (i > 1) EXPECT_LT(prev, t);
    prev = t;
  }
}

TEST_F(CliTest, EvalRejectsFeatureMismatch) {
  const auto m = scratch_ / "m";
  auto args = small_train(m.string());
  args.insert(args.end(), {"--features", "reduced"});
  ASSERT_EQ(invoke(args).code, 0);
  const auto r = invoke({"eval", "--model", (m / "model.txt").string(), "--data", data_, "--out",
                         (scratch_ / "e").string(), "--features", "all"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("temp,rain_1h,clouds_all,traffic_volume"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("hour_sin"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(scratch_ / "e" / "predictions.csv"));
}

TEST_F(CliTest, EvalRejectsCorruptModel) {
  write_file_atomic(scratch_ / "bad.txt", "trafficast-model v2\n");
  const auto r = invoke({"eval", "--model", (scratch_ / "bad.txt").string(), "--data", data_, "--out",
                         (scratch_ / "e").string()});
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("version"), std::string::npos) << r.err;
}

TEST_F(CliTest, StatsReportsCountsAndConstantColumn) {
  // snow_1h is zero in every row
  std::vector<RawRecord> rows;
  for (int h = 0; h < 48; ++h) {
    char when[32];
    std::snprintf(when, sizeof when, "2016-07-%02d %02d:00:00", 1 + h / 24, h % 24);
    rows.push_back(trafficast::testing::make_record(when, 100.0 * h, 290.0 + h % 5));
  }
  rows.push_back(rows.front());
  std::ostringstream csv;
  write_csv(csv, rows);
  write_file_atomic(scratch_ / "d.csv", csv.str());

  const auto out = scratch_ / "stats.csv";
  const auto r = invoke({"stats", "--data", (scratch_ / "d.csv").string(), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rows_read 49"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("unique_rows 48"), std::string::npos) << r.out;
  const auto text = read_file(out);
  EXPECT_NE(text.find("\nsnow_1h,48,0,0,0,0,0,0,0\n"), std::string::npos) << text;
  EXPECT_TRUE(fs::exists(scratch_ / "stats_outliers.csv"));
}

TEST_F(CliTest, GridRecordsFailuresAndContinues) {
  const auto out = scratch_ / "grid";
  const auto r = invoke({"grid", "--data", data_, "--out", out.string(), "--max-epochs", "1",
                         "--cells", "gru", "--feature-sets", "reduced", "--settings", "A",
                         "--lookbacks", "6,5000"});
  EXPECT_EQ(r.code, cli::kFailure);
  const auto rows = lines(read_file(out / "grid_report.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], cli::kGridHeader);
  EXPECT_EQ(rows[1].substr(0, 16), "gru,6,reduced,A,");
  EXPECT_EQ(rows[1].substr(rows[1].size() - 3), ",ok");
  EXPECT_EQ(rows[2].substr(0, 19), "gru,5000,reduced,A,");
  EXPECT_NE(rows[2].find(",error: "), std::string::npos) << rows[2];
  EXPECT_TRUE(fs::exists(out / "runs" / "gru_l6_reduced_A" / "model.txt"));
}

TEST_F(CliTest, GridRejectsBadOptions) {
  EXPECT_EQ(invoke({"grid", "--data", data_, "--out", "g", "--scale", "2"}).code, cli::kUsage);
  EXPECT_EQ(invoke({"grid", "--data", data_, "--out", "g", "--settings", "C"}).code, cli::kUsage);
}
