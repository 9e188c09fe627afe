#include "trafficast/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trafficast/io.hpp"
#include "trafficast/preprocess.hpp"

namespace trafficast {

std::string_view to_string(FeatureSet set) noexcept {
  return set == FeatureSet::all ? "all" : "reduced";
}

FeatureSet parse_feature_set(std::string_view text) {
  if (text == "all") return FeatureSet::all;
  if (text == "reduced") return FeatureSet::reduced;
  throw std::invalid_argument("unknown feature set '" + std::string(text) +
                              "' (expected all or reduced)");
}

std::size_t FeatureFrame::column_index(std::string_view name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("unknown column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> FeatureFrame::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = values(r, c);
  return out;
}

FeatureFrame FeatureFrame::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw std::out_of_range("FeatureFrame::slice out of range");
  std::vector<std::size_t> idx(end - begin);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = begin + i;
  return select_rows(idx);
}

FeatureFrame FeatureFrame::select_rows(std::span<const std::size_t> rows_to_keep) const {
  FeatureFrame out;
  out.columns = columns;
  out.target_col = target_col;
  out.values = Matrix(rows_to_keep.size(), columns.size());
  out.timestamps.reserve(rows_to_keep.size());
  for (std::size_t i = 0; i < rows_to_keep.size(); ++i) {
    const std::size_t r = rows_to_keep[i];
    out.timestamps.push_back(timestamps.at(r));
    std::copy(values.row(r).begin(), values.row(r).end(), out.values.row(i).begin());
  }
  return out;
}

FeatureFrame FeatureFrame::concat(const FeatureFrame& other) const {
  if (other.columns != columns) throw std::invalid_argument("FeatureFrame::concat: column mismatch");
  FeatureFrame out;
  out.columns = columns;
  out.target_col = target_col;
  out.timestamps = timestamps;
  out.timestamps.insert(out.timestamps.end(), other.timestamps.begin(), other.timestamps.end());
  std::vector<double> data(values.values().begin(), values.values().end());
  data.insert(data.end(), other.values.values().begin(), other.values.values().end());
  out.values = Matrix(out.timestamps.size(), columns.size(), std::move(data));
  return out;
}

FeatureFrame encode(const std::vector<RawRecord>& records, FeatureSet set) {
  FeatureFrame frame;
  std::vector<std::string> weather;
  if (set == FeatureSet::reduced) {
    frame.columns = {"temp", "rain_1h", "clouds_all", std::string(kTargetColumn)};
  } else {
    std::set<std::string> categories;
    for (const auto& r : records) categories.insert(r.weather_main);
    weather.assign(categories.begin(), categories.end());
    frame.columns = {"temp", "rain_1h", "snow_1h", "clouds_all", "holiday_flag"};
    for (const auto& w : weather) frame.columns.push_back("weather_" + w);
    for (const char* c : {"hour_sin", "hour_cos", "dow_sin", "dow_cos"}) frame.columns.emplace_back(c);
    frame.columns.emplace_back(kTargetColumn);
  }
  frame.target_col = frame.columns.size() - 1;
  frame.values = Matrix(records.size(), frame.columns.size());
  frame.timestamps.reserve(records.size());

  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RawRecord& r = records[i];
    frame.timestamps.push_back(r.date_time);
    auto row = frame.values.row(i);
    if (set == FeatureSet::reduced) {
      row[0] = r.temp;
      row[1] = r.rain_1h;
      row[2] = r.clouds_all;
      row[3] = r.traffic_volume;
      continue;
    }
    std::size_t c = 0;
    row[c++] = r.temp;
    row[c++] = r.rain_1h;
    row[c++] = r.snow_1h;
    row[c++] = r.clouds_all;
    row[c++] = r.holiday == "None" ? 0.0 : 1.0;
    for (const auto& w : weather) row[c++] = r.weather_main == w ? 1.0 : 0.0;
    const double hour = hour_of(r.date_time);
    const double dow = weekday_of(r.date_time);
    row[c++] = std::sin(two_pi * hour / 24.0);
    row[c++] = std::cos(two_pi * hour / 24.0);
    row[c++] = std::sin(two_pi * dow / 7.0);
    row[c++] = std::cos(two_pi * dow / 7.0);
    row[c++] = r.traffic_volume;
  }
  return frame;
}

std::vector<ColumnSummary> describe(const FeatureFrame& frame) {
  if (frame.rows() == 0) throw std::invalid_argument("describe: empty frame");
  std::vector<ColumnSummary> out;
  for (std::size_t c = 0; c < frame.columns.size(); ++c) {
    std::vector<double> v = frame.column(c);
    ColumnSummary s;
    s.column = frame.columns[c];
    s.count = v.size();
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / n;
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / n);
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    s.q25 = quantile(v, 0.25);
    s.q50 = quantile(v, 0.50);
    s.q75 = quantile(v, 0.75);
    out.push_back(s);
  }
  return out;
}

std::string describe_csv(const std::vector<ColumnSummary>& summary) {
  std::ostringstream out;
  out << "column,count,mean,std,min,q25,q50,q75,max\n";
  for (const auto& s : summary) {
    out << s.column << ',' << s.count << ',' << format_double(s.mean) << ','
        << format_double(s.std) << ',' << format_double(s.min) << ',' << format_double(s.q25)
        << ',' << format_double(s.q50) << ',' << format_double(s.q75) << ','
        << format_double(s.max) << '\n';
  }
  return out.str();
}

}  // namespace trafficast
