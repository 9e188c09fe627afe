#include "trafficast/records.hpp"

#include "trafficast/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace trafficast {
namespace {

using namespace std::chrono;

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string_view strip_eol(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += '"';
  return out;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DD HH:MM:SS
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' || text[10] != ' ' ||
      text[13] != ':' || text[16] != ':') {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
  int y, mo, d, h, mi, s;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
      !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
      !parse_int(text.substr(14, 2), mi) || !parse_int(text.substr(17, 2), s)) {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) {
    throw std::invalid_argument("invalid date/time '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp ts) {
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int year_of(Timestamp ts) {
  return static_cast<int>(year_month_day{floor<days>(ts)}.year());
}

int hour_of(Timestamp ts) {
  return static_cast<int>(floor<hours>(ts - floor<days>(ts)).count());
}

int weekday_of(Timestamp ts) {
  return static_cast<int>(weekday{floor<days>(ts)}.iso_encoding()) - 1;
}

RawTable parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open data file '" + path.string() + "'");
  return parse_csv(in, path.string());
}

RawTable parse_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError(source_name + ": empty file");
  std::string_view header = strip_eol(line);
  if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != kMetroHeader) {
    const auto got = split_fields(header);
    const auto want = split_fields(kMetroHeader);
    for (const auto& col : want) {
      if (std::find(got.begin(), got.end(), col) == got.end()) {
        throw CsvError(source_name + ": missing column '" + col + "' in header");
      }
    }
    throw CsvError(source_name + ": header must be exactly '" + std::string(kMetroHeader) + "'");
  }

  RawTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = strip_eol(line);
    if (body.empty()) continue;
    const auto f = split_fields(body);
    auto fail = [&](const std::string& why) -> CsvError {
      return CsvError(source_name + ":" + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 9) {
      throw fail("expected 9 fields, found " + std::to_string(f.size()));
    }
    RawRecord r;
    r.holiday = f[0];
    if (!parse_double(f[1], r.temp)) throw fail("bad temp '" + f[1] + "'");
    if (!parse_double(f[2], r.rain_1h)) throw fail("bad rain_1h '" + f[2] + "'");
    if (!parse_double(f[3], r.snow_1h)) throw fail("bad snow_1h '" + f[3] + "'");
    if (!parse_double(f[4], r.clouds_all)) throw fail("bad clouds_all '" + f[4] + "'");
    r.weather_main = f[5];
    r.weather_description = f[6];
    try {
      r.date_time = parse_timestamp(f[7]);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
    if (!parse_double(f[8], r.traffic_volume)) {
      throw fail("bad traffic_volume '" + f[8] + "'");
    }
    if (r.traffic_volume < 0) throw fail("negative traffic_volume");
    table.records.push_back(std::move(r));
  }
  if (table.records.empty()) throw CsvError(source_name + ": no data rows");
  table.rows_read = table.records.size();

  std::stable_sort(table.records.begin(), table.records.end(),
                   [](const RawRecord& a, const RawRecord& b) { return a.date_time < b.date_time; });
  auto last = std::unique(table.records.begin(), table.records.end(),
                          [](const RawRecord& a, const RawRecord& b) {
                            return a.date_time == b.date_time;
                          });
  table.duplicates_dropped = static_cast<std::size_t>(table.records.end() - last);
  table.records.erase(last, table.records.end());
  return table;
}

void write_csv(std::ostream& out, const std::vector<RawRecord>& records) {
  out << kMetroHeader << '\n';
  for (const auto& r : records) {
    out << quote_if_needed(r.holiday) << ',' << format_double(r.temp) << ','
        << format_double(r.rain_1h) << ',' << format_double(r.snow_1h) << ','
        << format_double(r.clouds_all) << ',' << quote_if_needed(r.weather_main) << ','
        << quote_if_needed(r.weather_description) << ',' << format_timestamp(r.date_time) << ','
        << format_double(r.traffic_volume) << '\n';
  }
}

}  // namespace trafficast
