#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trafficast {

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD HH:MM:SS`, rejecting impossible calendar dates.
/// Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
int year_of(Timestamp ts);
int hour_of(Timestamp ts);
/// 0 = Monday ... 6 = Sunday.
int weekday_of(Timestamp ts);

/// One row of the Metro Interstate Traffic Volume file.
struct RawRecord {
  std::string holiday;
  double temp = 0.0;      // kelvin
  double rain_1h = 0.0;   // mm
  double snow_1h = 0.0;   // mm
  double clouds_all = 0.0;
  std::string weather_main;
  std::string weather_description;
  Timestamp date_time{};
  double traffic_volume = 0.0;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kMetroHeader =
    "holiday,temp,rain_1h,snow_1h,clouds_all,weather_main,weather_description,date_time,"
    "traffic_volume";

struct RawTable {
  /// Sorted by timestamp, first occurrence kept for duplicate timestamps.
  std::vector<RawRecord> records;
  std::size_t rows_read = 0;
  std::size_t duplicates_dropped = 0;
};

RawTable parse_csv(const std::filesystem::path& path);
RawTable parse_csv(std::istream& in, const std::string& source_name = "<stream>");

/// Serializes records with the standard header.
void write_csv(std::ostream& out, const std::vector<RawRecord>& records);

}  // namespace trafficast
