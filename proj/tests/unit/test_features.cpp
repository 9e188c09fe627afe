#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "trafficast/features.hpp"

using namespace trafficast;
using trafficast::testing::hourly_frame;
using trafficast::testing::make_record;

TEST(Encode, ReducedColumnsInOrder) {
  const auto f = encode({make_record("2016-01-01 00:00:00", 100)}, FeatureSet::reduced);
  EXPECT_EQ(f.columns, (std::vector<std::string>{"temp", "rain_1h", "clouds_all", "traffic_volume"}));
  EXPECT_EQ(f.target_col, 3u);
  EXPECT_EQ(f.values(0, 3), 100);
}

TEST(Encode, AllColumnsWithSortedWeatherOneHot) {
  const auto f = encode({make_record("2016-01-01 00:00:00", 1, 280, 0, "None", "Snow"),
                         make_record("2016-01-01 01:00:00", 2, 280, 0, "None", "Clear"),
                         make_record("2016-01-01 02:00:00", 3, 280, 0, "None", "Mist")},
                        FeatureSet::all);
  const std::vector<std::string> expected{
      "temp",          "rain_1h",      "snow_1h",      "clouds_all", "holiday_flag",
      "weather_Clear", "weather_Mist", "weather_Snow", "hour_sin",   "hour_cos",
      "dow_sin",       "dow_cos",      "traffic_volume"};
  EXPECT_EQ(f.columns, expected);
  EXPECT_EQ(f.target_col, expected.size() - 1);
  EXPECT_EQ(f.values(0, f.column_index("weather_Snow")), 1);
  EXPECT_EQ(f.values(0, f.column_index("weather_Clear")), 0);
  EXPECT_EQ(f.values(1, f.column_index("weather_Clear")), 1);
  for (std::size_t r = 0; r < 3; ++r) {
    double hot = 0;
    for (const char* c : {"weather_Clear", "weather_Mist", "weather_Snow"}) hot += f.values(r, f.column_index(c));
    EXPECT_EQ(hot, 1);
  }
}

TEST(Encode, HolidayFlag) {
  const auto f = encode({make_record("2016-12-25 00:00:00", 1, 270, 0, "Christmas Day"),
                         make_record("2016-12-25 01:00:00", 1, 270, 0, "None")},
                        FeatureSet::all);
  const auto c = f.column_index("holiday_flag");
  EXPECT_EQ(f.values(0, c), 1);
  EXPECT_EQ(f.values(1, c), 0);
}

TEST(Encode, CyclicalTime) {
  const auto f = encode({make_record("2016-02-29 00:00:00", 1), make_record("2016-02-29 06:00:00", 1)},
                        FeatureSet::all);
  EXPECT_EQ(f.values(0, f.column_index("hour_sin")), 0.0);
  EXPECT_EQ(f.values(0, f.column_index("hour_cos")), 1.0);
  EXPECT_NEAR(f.values(1, f.column_index("hour_sin")), 1.0, 1e-15);
  EXPECT_NEAR(f.values(1, f.column_index("hour_cos")), 0.0, 1e-15);
  // Monday is day 0
  EXPECT_EQ(f.values(0, f.column_index("dow_sin")), 0.0);
  EXPECT_EQ(f.values(0, f.column_index("dow_cos")), 1.0);
}

TEST(Encode, ParseFeatureSet) {
  EXPECT_EQ(parse_feature_set("all"), FeatureSet::all);
  EXPECT_EQ(parse_feature_set("reduced"), FeatureSet::reduced);
  EXPECT_THROW(parse_feature_set("some"), std::invalid_argument);
}

TEST(Describe, SymmetricTriple) {
  const auto s = describe(hourly_frame({"traffic_volume"}, {{1}, {2}, {3}}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].count, 3u);
  EXPECT_DOUBLE_EQ(s[0].mean, 2);
  EXPECT_EQ(s[0].min, 1);
  EXPECT_EQ(s[0].max, 3);
  EXPECT_NEAR(s[0].std, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s[0].q25, 1.5);
  EXPECT_DOUBLE_EQ(s[0].q50, 2);
  EXPECT_DOUBLE_EQ(s[0].q75, 2.5);
}

TEST(Describe, ConstantColumn) {
  const auto s = describe(hourly_frame({"x", "traffic_volume"}, {{4, 1}, {4, 2}, {4, 7}, {4, 9}}));
  EXPECT_EQ(s[0].std, 0);
  for (double v : {s[0].min, s[0].q25, s[0].q50, s[0].q75, s[0].max, s[0].mean}) EXPECT_EQ(v, 4);
}

TEST(Describe, EmptyRejected) {
  EXPECT_THROW(describe(hourly_frame({"traffic_volume"}, {})), std::invalid_argument);
}

TEST(Describe, CsvHeader) {
  const auto text = describe_csv(describe(hourly_frame({"traffic_volume"}, {{1}, {2}, {3}})));
  EXPECT_EQ(text.substr(0, text.find('\n')), "column,count,mean,std,min,q25,q50,q75,max");
  EXPECT_NE(text.find("\ntraffic_volume,3,2,"), std::string::npos) << text;
}

TEST(Frame, SliceSelectConcat) {
  const auto f = hourly_frame({"a", "traffic_volume"}, {{1, 10}, {2, 20}, {3, 30}, {4, 40}});
  const auto s = f.slice(1, 3);
  EXPECT_EQ(s.rows(), 2u);
  EXPECT_EQ(s.values(0, 0), 2);
  EXPECT_EQ(s.timestamps[0], f.timestamps[1]);
  const std::vector<std::size_t> pick{0, 3};
  const auto p = f.select_rows(pick);
  EXPECT_EQ(p.values(1, 1), 40);
  const auto c = f.slice(0, 1).concat(f.slice(3, 4));
  EXPECT_EQ(c.values, p.values);
  EXPECT_EQ(c.timestamps, p.timestamps);
  EXPECT_THROW(f.column_index("b"), std::invalid_argument);
}
