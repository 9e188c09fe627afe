#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trafficast/preprocess.hpp"

using namespace trafficast;
using trafficast::testing::brute_iqr_bounds;
using trafficast::testing::hourly_frame;
using trafficast::testing::segment_quantile;

namespace {

FeatureFrame single_column(const std::vector<double>& values) {
  std::vector<std::vector<double>> rows;
  for (double v : values) rows.push_back({v, 0.0});
  return hourly_frame({"x", "traffic_volume"}, rows);
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::normal_distribution<double> normal(0.0, 50.0);
  std::uniform_int_distribution<int> small(0, 5);
  std::vector<double> v(n);
  const int k = kind(rng);
  for (double& x : v) x = k == 0 ? normal(rng) : k == 1 ? small(rng) : std::exp(normal(rng) / 20.0);
  return v;
}

}  // namespace

TEST(Quantile, Interpolates) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_EQ(quantile(v, 0.0), 1);
  EXPECT_EQ(quantile(v, 1.0), 4);
  const std::vector<double> one{7};
  EXPECT_EQ(quantile(one, 0.3), 7);
}

TEST(Quantile, Rejects) {
  EXPECT_THROW(quantile(std::vector<double>{}, 0.5), std::invalid_argument);
  const std::vector<double> v{1, 2};
  EXPECT_THROW(quantile(v, 1.5), std::invalid_argument);
  EXPECT_THROW(quantile(v, -0.1), std::invalid_argument);
}

TEST(Quantile, MatchesSegmentOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto v = random_values(rng, size(rng));
    std::sort(v.begin(), v.end());
    for (double q : {0.0, 0.25, 0.5, 0.75, 1.0, unit(rng)}) {
      const double expected = segment_quantile(v, q);
      ASSERT_NEAR(quantile(v, q), expected, 1e-12 * std::max(1.0, std::abs(expected)))
          << "n=" << v.size() << " q=" << q;
    }
  }
}

TEST(Iqr, ConstantColumnRemovesNothing) {
  const auto r = iqr_filter(single_column({5, 5, 5, 5, 5}), {"x"});
  EXPECT_EQ(r.rows_removed, 0u);
  EXPECT_EQ(r.bounds[0].lower, 5);
  EXPECT_EQ(r.bounds[0].upper, 5);
}

TEST(Iqr, DropsTheFarPoint) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 1000};
  const auto oracle = brute_iqr_bounds(v);
  const auto r = iqr_filter(single_column(v), {"x"});
  EXPECT_NEAR(r.bounds[0].lower, oracle.lower, 1e-12);
  EXPECT_NEAR(r.bounds[0].upper, oracle.upper, 1e-12);
  EXPECT_DOUBLE_EQ(r.bounds[0].q1, 3.25);
  EXPECT_DOUBLE_EQ(r.bounds[0].q3, 7.75);
  EXPECT_EQ(r.rows_removed, 1u);
  ASSERT_EQ(r.frame.rows(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(r.frame.values(i, 0), static_cast<double>(i + 1));
}

TEST(Iqr, BoundsMatchBruteForceOnRandomArrays) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(5, 200);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = random_values(rng, size(rng));
    const auto oracle = brute_iqr_bounds(v);
    const auto r = iqr_filter(single_column(v), {"x"});
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(oracle.lower), std::abs(oracle.upper)));
    ASSERT_NEAR(r.bounds[0].lower, oracle.lower, tol);
    ASSERT_NEAR(r.bounds[0].upper, oracle.upper, tol);

    const auto kept = std::count_if(v.begin(), v.end(), [&](double x) {
      return x >= r.bounds[0].lower && x <= r.bounds[0].upper;
    });
    ASSERT_EQ(r.frame.rows(), static_cast<std::size_t>(kept));
  }
}

TEST(Iqr, RowDroppedOnceAcrossColumns) {
  std::vector<std::vector<double>> rows;
  for (int i = 1; i <= 9; ++i) rows.push_back({double(i), double(i), 0});
  rows.push_back({1000, -1000, 0});
  const auto f = hourly_frame({"a", "b", "traffic_volume"}, rows);
  const auto r = iqr_filter(f, {"a", "b"});
  EXPECT_EQ(r.removed_per_column, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(r.rows_removed, 1u);
  EXPECT_EQ(r.frame.rows(), 9u);
  EXPECT_THROW(iqr_filter(f, {"c"}), std::invalid_argument);
}

TEST(Iqr, OutputIsOrderedSubset) {
  std::mt19937_64 rng(2);
  const auto v = random_values(rng, 150);
  const auto f = single_column(v);
  const auto r = iqr_filter(f, {"x"});
  EXPECT_LE(r.frame.rows(), f.rows());
  std::size_t j = 0;
  for (std::size_t i = 0; i < f.rows() && j < r.frame.rows(); ++i) {
    if (f.timestamps[i] == r.frame.timestamps[j]) {
      EXPECT_EQ(f.values(i, 0), r.frame.values(j, 0));
      ++j;
    }
  }
  EXPECT_EQ(j, r.frame.rows());
}

TEST(Split, EightyTwentyThenTest) {
  std::vector<std::vector<double>> rows(130, {0.0, 1.0});
  // 100 rows in late 2017, 30 in 2018
  const auto f = hourly_frame({"x", "traffic_volume"}, rows, "2017-12-27 20:00:00");
  const auto s = split(f, 2017, 0.2);
  EXPECT_EQ(s.train.rows(), 80u);
  EXPECT_EQ(s.val.rows(), 20u);
  EXPECT_EQ(s.test.rows(), 30u);
  EXPECT_EQ(s.train.timestamps.front(), f.timestamps.front());
  EXPECT_LT(s.train.timestamps.back(), s.val.timestamps.front());
  EXPECT_LT(s.val.timestamps.back(), s.test.timestamps.front());
  EXPECT_EQ(year_of(s.val.timestamps.back()), 2017);
  EXPECT_EQ(year_of(s.test.timestamps.front()), 2018);
}

TEST(Split, AllTestYearsRejected) {
  std::vector<std::vector<double>> rows(50, {0.0, 1.0});
  EXPECT_THROW(split(hourly_frame({"x", "traffic_volume"}, rows, "2018-01-01 00:00:00")),
               std::invalid_argument);
  EXPECT_THROW(split(hourly_frame({"x", "traffic_volume"}, rows, "2016-01-01 00:00:00")),
               std::invalid_argument);
}

TEST(Scaler, MapsRangeToUnit) {
  const auto train = hourly_frame({"x", "traffic_volume"}, {{0, 100}, {5, 300}, {10, 200}});
  const auto p = fit_scaler(train);
  const auto t = transform(train, p);
  EXPECT_DOUBLE_EQ(t.values(1, 0), 0.5);
  EXPECT_EQ(t.values(0, 0), 0);
  EXPECT_EQ(t.values(2, 0), 1);
  EXPECT_EQ(t.values(0, 1), 0);
  EXPECT_EQ(t.values(1, 1), 1);
  EXPECT_DOUBLE_EQ(inverse_target(0.5, p), 200);
}

TEST(Scaler, ConstantColumnMapsToZero) {
  const auto f = hourly_frame({"x", "traffic_volume"}, {{3, 1}, {3, 2}});
  const auto t = transform(f, fit_scaler(f));
  EXPECT_EQ(t.values(0, 0), 0);
  EXPECT_EQ(t.values(1, 0), 0);
}

TEST(Scaler, MismatchedColumnsRejected) {
  const auto p = fit_scaler(hourly_frame({"x", "traffic_volume"}, {{0, 1}, {1, 2}}));
  EXPECT_THROW(transform(hourly_frame({"y", "traffic_volume"}, {{0, 1}}), p), std::invalid_argument);
  EXPECT_THROW(transform(hourly_frame({"traffic_volume"}, {{1}}), p), std::invalid_argument);
}

TEST(Scaler, RoundTripWithinTolerance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.0, 7280.0);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 500; ++i) rows.push_back({d(rng)});
  const auto f = hourly_frame({"traffic_volume"}, rows);
  const auto p = fit_scaler(f);
  const auto t = transform(f, p);
  const auto back = inverse_target(t.column(0), p);
  double worst = 0;
  for (std::size_t i = 0; i < back.size(); ++i) worst = std::max(worst, std::abs(back[i] - rows[i][0]));
  EXPECT_LT(worst, 1e-9);
}

TEST(Scaler, TrainValuesStayInUnitInterval) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1e3);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 300; ++i) rows.push_back({d(rng), d(rng), d(rng)});
  const auto f = hourly_frame({"a", "b", "traffic_volume"}, rows);
  const auto t = transform(f, fit_scaler(f));
  for (double v : t.values.values()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}
