#pragma once

#include <cstddef>
#include <span>

#include "trafficast/preprocess.hpp"

namespace trafficast {

struct EvalReport {
  double mse = 0.0;   // vehicles^2
  double mae = 0.0;   // vehicles
  double mape = 0.0;  // ratio; multiply by 100 for percent
  std::size_t n = 0;
  double epsilon = 1e-8;
};

double mse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
/// Mean of |y - y_hat| / max(epsilon, |y|); zero actuals are allowed.
double mape(std::span<const double> actual, std::span<const double> predicted,
            double epsilon = 1e-8);

/// Maps scaled predictions and targets back to vehicle counts with the
/// scaler's target range, then computes all three metrics.
EvalReport evaluate(std::span<const double> predicted_scaled, std::span<const double> actual_scaled,
                    const ScalerParams& scaler, double epsilon = 1e-8);

}  // namespace trafficast
