#pragma once

// Independent reference computations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "trafficast/matrix.hpp"

namespace trafficast::testing {

/// Central difference d loss / d m(r, c) for every entry of `m`. The loss
/// closure must read `m` by reference.
inline Matrix numeric_gradient(const std::function<double()>& loss, Matrix& m, double step = 1e-5) {
  Matrix g(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) {
    double& v = m.values()[i];
    const double saved = v;
    v = saved + step;
    const double up = loss();
    v = saved - step;
    const double down = loss();
    v = saved;
    g.values()[i] = (up - down) / (2.0 * step);
  }
  return g;
}

struct GradientMismatch {
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

inline bool gradient_close(double analytic, double numeric, double rel = 1e-4, double abs_floor = 1e-7) {
  const double diff = std::abs(analytic - numeric);
  return diff <= abs_floor || diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

/// First entry that fails the relative/absolute tolerance, if any.
inline std::vector<GradientMismatch> compare_gradients(const Matrix& analytic, const Matrix& numeric,
                                                       double rel = 1e-4, double abs_floor = 1e-7) {
  std::vector<GradientMismatch> bad;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic.values()[i];
    const double n = numeric.values()[i];
    if (!gradient_close(a, n, rel, abs_floor)) bad.push_back({i, a, n});
  }
  return bad;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

/// Quantile by walking the piecewise-linear curve through the points
/// (i / (n - 1), v_i) until the segment containing q is found.
inline double segment_quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 1) return values[0];
  const long double step = 1.0L / static_cast<long double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const long double left = step * static_cast<long double>(i);
    const long double right = step * static_cast<long double>(i + 1);
    if (q <= right || i + 2 == n) {
      const long double t = (static_cast<long double>(q) - left) / (right - left);
      return static_cast<double>(values[i] + t * (values[i + 1] - values[i]));
    }
  }
  return values.back();
}

struct BruteBounds {
  double lower, upper;
};

inline BruteBounds brute_iqr_bounds(const std::vector<double>& values) {
  const double q1 = segment_quantile(values, 0.25);
  const double q3 = segment_quantile(values, 0.75);
  return {q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1)};
}

}  // namespace trafficast::testing
