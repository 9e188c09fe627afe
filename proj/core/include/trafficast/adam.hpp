#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trafficast/matrix.hpp"
#include "trafficast/network.hpp"

namespace trafficast {

/// Moment accumulators for bias-corrected Adam. Accumulators are created
/// lazily on the first step, shaped like the parameters they track.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update of every params[k] using grads[k] at learning rate lr.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, double lr);

void adam_step(ParameterSet& params, const ParameterSet& grads, AdamState& state, double lr);

}  // namespace trafficast
