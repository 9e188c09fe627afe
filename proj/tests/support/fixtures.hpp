#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "trafficast/features.hpp"
#include "trafficast/records.hpp"

namespace trafficast::testing {

/// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("trafficast_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline RawRecord make_record(const std::string& when, double volume, double temp = 280.0,
                             double rain = 0.0, const std::string& holiday = "None",
                             const std::string& weather = "Clear") {
  RawRecord r;
  r.holiday = holiday;
  r.temp = temp;
  r.rain_1h = rain;
  r.snow_1h = 0.0;
  r.clouds_all = 20.0;
  r.weather_main = weather;
  r.weather_description = "sky is clear";
  r.date_time = parse_timestamp(when);
  r.traffic_volume = volume;
  return r;
}

/// Frame with hourly timestamps starting at `start` and the given column values.
inline FeatureFrame hourly_frame(const std::vector<std::string>& columns,
                                 const std::vector<std::vector<double>>& rows,
                                 const std::string& start = "2016-01-01 00:00:00") {
  FeatureFrame f;
  f.columns = columns;
  f.target_col = columns.size() - 1;
  f.values = Matrix(rows.size(), columns.size());
  Timestamp t = parse_timestamp(start);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    f.timestamps.push_back(t + std::chrono::hours(static_cast<long>(r)));
    for (std::size_t c = 0; c < columns.size(); ++c) f.values(r, c) = rows[r][c];
  }
  return f;
}

}  // namespace trafficast::testing

#include "trafficast/windows.hpp"

namespace trafficast::testing {

/// Noiseless sine mapped into [0, 1]: one feature that is also the target.
inline WindowedDataset sine_windows(std::size_t windows, std::size_t lookback,
                                    double period = 24.0, double phase = 0.0) {
  const std::size_t rows = windows + lookback;
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < rows; ++i) {
    const double v = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * (static_cast<double>(i) + phase) / period);
    values.push_back({v});
  }
  return make_windows(hourly_frame({"traffic_volume"}, values), WindowConfig{lookback, 1, 1});
}

}  // namespace trafficast::testing
