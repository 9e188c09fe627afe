#include "trafficast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trafficast {
namespace {

void check_lengths(const char* op, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(op) + ": length mismatch " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  if (a.empty()) throw std::invalid_argument(std::string(op) + ": empty input");
}

}  // namespace

double mse(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths("mse", actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double r = actual[i] - predicted[i];
    sum += r * r;
  }
  return sum / static_cast<double>(actual.size());
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_lengths("mae", actual, predicted);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
  return sum / static_cast<double>(actual.size());
}

double mape(std::span<const double> actual, std::span<const double> predicted, double epsilon) {
  check_lengths("mape", actual, predicted);
  if (!(epsilon > 0.0)) throw std::invalid_argument("mape: epsilon must be > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    sum += std::abs(actual[i] - predicted[i]) / std::max(epsilon, std::abs(actual[i]));
  }
  return sum / static_cast<double>(actual.size());
}

EvalReport evaluate(std::span<const double> predicted_scaled, std::span<const double> actual_scaled,
                    const ScalerParams& scaler, double epsilon) {
  check_lengths("evaluate", actual_scaled, predicted_scaled);
  const auto predicted = inverse_target(predicted_scaled, scaler);
  const auto actual = inverse_target(actual_scaled, scaler);
  EvalReport report;
  report.mse = mse(actual, predicted);
  report.mae = mae(actual, predicted);
  report.mape = mape(actual, predicted, epsilon);
  report.n = actual.size();
  report.epsilon = epsilon;
  return report;
}

}  // namespace trafficast
