#pragma once

#include <cstddef>
#include <cstdint>

#include "trafficast/cells.hpp"
#include "trafficast/matrix.hpp"

namespace trafficast {

struct GruParams {
  Matrix w_r, w_z, w_h;
  Matrix b_r, b_z, b_h;

  static GruParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  std::size_t hidden_dim() const noexcept { return w_r.rows(); }
  std::size_t input_dim() const noexcept { return w_r.cols() - w_r.rows(); }

  void validate() const;

  template <class F>
  void for_each(F&& f) {
    f("w_r", w_r); f("w_z", w_z); f("w_h", w_h);
    f("b_r", b_r); f("b_z", b_z); f("b_h", b_h);
  }
  template <class F>
  void for_each(F&& f) const {
    f("w_r", w_r); f("w_z", w_z); f("w_h", w_h);
    f("b_r", b_r); f("b_z", b_z); f("b_h", b_h);
  }

  friend bool operator==(const GruParams&, const GruParams&) = default;
};

struct GruCache {
  Matrix concat;        // [h_{t-1}; x_t]
  Matrix concat_reset;  // [h_{t-1} * r_t; x_t]
  Matrix r, z;
  Matrix h_tilde;
  Matrix h;

  Matrix x() const;
  Matrix h_prev() const;
};

struct GruStep {
  CellState next;
  GruCache cache;
};

struct GruGradients {
  GruParams d_params;
  Matrix d_x;
  Matrix d_prev_h;
};

/// Glorot-uniform gate weights, all biases zero.
GruParams gru_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

/// h_t = z * h_{t-1} + (1 - z) * tanh(W_h [h_{t-1} * r; x] + b_h).
/// The update gate weights the previous state. `prev.c` is ignored.
GruStep gru_step(const GruParams& p, const Matrix& x, const CellState& prev);

GruGradients gru_backward(const GruParams& p, const GruCache& cache, const Matrix& d_h);

}  // namespace trafficast
