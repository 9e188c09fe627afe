#include "trafficast/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace trafficast {
namespace {

using namespace std::chrono;

// Relative volume by hour of day.
constexpr std::array<double, 24> kWeekdayShape = {
    0.09, 0.05, 0.04, 0.05, 0.13, 0.45, 0.88, 1.00, 0.92, 0.76, 0.72, 0.76,
    0.80, 0.80, 0.84, 0.90, 0.96, 0.93, 0.72, 0.54, 0.46, 0.43, 0.33, 0.18};
constexpr std::array<double, 24> kWeekendShape = {
    0.20, 0.14, 0.10, 0.06, 0.05, 0.08, 0.15, 0.26, 0.40, 0.53, 0.62, 0.68,
    0.70, 0.70, 0.68, 0.66, 0.64, 0.60, 0.54, 0.46, 0.40, 0.36, 0.28, 0.18};

const char* holiday_name(const year_month_day& ymd) {
  const unsigned m = static_cast<unsigned>(ymd.month());
  const unsigned d = static_cast<unsigned>(ymd.day());
  const weekday wd{sys_days{ymd}};
  if (m == 1 && d == 1) return "New Years Day";
  if (m == 7 && d == 4) return "Independence Day";
  if (m == 11 && d == 11) return "Veterans Day";
  if (m == 12 && d == 25) return "Christmas Day";
  if (m == 9 && wd == Monday && d <= 7) return "Labor Day";
  if (m == 11 && wd == Thursday && d >= 22 && d <= 28) return "Thanksgiving Day";
  if (m == 5 && wd == Monday && d >= 25) return "Memorial Day";
  if (m == 1 && wd == Monday && d >= 15 && d <= 21) return "Martin Luther King Jr Day";
  return nullptr;
}

struct Weather {
  std::string main;
  std::string description;
};

Weather classify(double rain, double snow, double clouds, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (snow > 0) return {"Snow", snow > 1.0 ? "heavy snow" : "light snow"};
  if (rain > 0) {
    if (rain > 8.0) return {"Thunderstorm", "thunderstorm with heavy rain"};
    if (rain < 0.3) return {"Drizzle", "light intensity drizzle"};
    return {"Rain", rain > 2.0 ? "moderate rain" : "light rain"};
  }
  if (clouds > 85) return {"Clouds", "overcast clouds"};
  if (clouds > 40) {
    if (u(rng) < 0.15) return {"Mist", "mist"};
    return {"Clouds", "broken clouds"};
  }
  if (u(rng) < 0.02) return {"Haze", "haze"};
  if (u(rng) < 0.01) return {"Fog", "fog"};
  return {"Clear", "sky is clear"};
}

}  // namespace

std::vector<RawRecord> generate_metro_like(const SyntheticConfig& cfg) {
  const Timestamp start = parse_timestamp(cfg.start);
  const Timestamp end = parse_timestamp(cfg.end);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> rain_amount(1.0 / 1.2);

  // Outage roughly where the real detector went dark for most of a year.
  const Timestamp outage_begin = parse_timestamp("2014-08-08 02:00:00");
  const Timestamp outage_end = parse_timestamp("2015-06-11 20:00:00");

  std::vector<RawRecord> rows;
  double clouds = 40.0;
  double traffic_noise = 0.0;
  double temp_noise = 0.0;
  int rain_left = 0;
  double rain_level = 0.0;
  bool spike_done = false;

  for (Timestamp ts = start; ts <= end; ts += hours{1}) {
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const int hour = static_cast<int>(floor<hours>(ts - day).count());
    const weekday wd{day};
    const double doy = static_cast<double>((day - sys_days{ymd.year() / January / 1}).count());

    // Weather state evolves even through missing hours.
    clouds = std::clamp(clouds + 12.0 * gauss(rng), 0.0, 100.0);
    temp_noise = 0.9 * temp_noise + 1.2 * gauss(rng);
    traffic_noise = 0.7 * traffic_noise + 0.05 * gauss(rng);
    if (rain_left > 0) {
      --rain_left;
    } else if (u(rng) < 0.02 + 0.02 * clouds / 100.0) {
      rain_left = 1 + static_cast<int>(u(rng) * 6);
      rain_level = rain_amount(rng);
    } else {
      rain_level = 0.0;
    }

    if (cfg.long_outage && ts >= outage_begin && ts < outage_end) continue;
    if (u(rng) < cfg.missing_rate) continue;

    RawRecord r;
    r.date_time = ts;
    const double season = std::sin(2.0 * std::numbers::pi * (doy - 110.0) / 365.25);
    const double diurnal = std::sin(2.0 * std::numbers::pi * (hour - 9) / 24.0);
    r.temp = std::round((281.0 + 16.0 * season + 4.5 * diurnal + temp_noise) * 100.0) / 100.0;
    r.clouds_all = std::round(clouds);
    const bool freezing = r.temp < 272.0;
    const double precip = rain_left > 0 ? rain_level : 0.0;
    r.rain_1h = freezing ? 0.0 : std::round(precip * 100.0) / 100.0;
    r.snow_1h = freezing ? std::round(precip * 0.2 * 100.0) / 100.0 : 0.0;

    const char* holiday = hour == 0 ? holiday_name(ymd) : nullptr;
    r.holiday = holiday ? holiday : "None";
    const bool holiday_day = holiday_name(ymd) != nullptr;
    const bool weekend = wd == Saturday || wd == Sunday;
    const auto& shape = (weekend || holiday_day) ? kWeekendShape : kWeekdayShape;
    double volume = 6300.0 * shape[static_cast<std::size_t>(hour)] * (1.0 + traffic_noise);
    if (r.snow_1h > 0) volume *= 0.85;
    if (r.rain_1h > 4.0) volume *= 0.93;
    volume = std::max(0.0, std::round(volume));
    if (u(rng) < cfg.zero_volume_rate) volume = 0.0;
    r.traffic_volume = volume;

    // Occasional sensor glitches that the IQR rule should catch.
    if (u(rng) < 1e-4) r.temp = 0.0;
    if (!spike_done && ymd.year() == year{2016} && ymd.month() == July && r.rain_1h > 0) {
      r.rain_1h = 9831.3;
      spike_done = true;
    }

    const Weather w = classify(r.rain_1h, r.snow_1h, r.clouds_all, rng);
    r.weather_main = w.main;
    r.weather_description = w.description;
    rows.push_back(r);

    if (u(rng) < cfg.duplicate_rate) {
      RawRecord dup = r;
      dup.weather_main = r.weather_main == "Mist" ? "Haze" : "Mist";
      dup.weather_description = dup.weather_main == "Mist" ? "mist" : "haze";
      rows.push_back(std::move(dup));
    }
  }
  return rows;
}

}  // namespace trafficast
