#pragma once

#include <cstddef>
#include <cstdint>
#include <cmath>
#include <random>

#include "trafficast/matrix.hpp"

namespace trafficast {

/// Recurrent state carried between steps. `c` is the LSTM memory cell and
/// stays empty for GRU layers.
struct CellState {
  Matrix h;
  Matrix c;

  static CellState zeros(std::size_t hidden, std::size_t batch, bool with_cell) {
    return {Matrix(hidden, batch), with_cell ? Matrix(hidden, batch) : Matrix()};
  }
};

namespace detail {

/// Glorot-uniform draw for a (rows x cols) gate matrix.
inline Matrix glorot_uniform(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

void check_dims(const char* op, std::size_t input_dim, std::size_t hidden_dim);

}  // namespace detail
}  // namespace trafficast
