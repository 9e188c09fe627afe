#pragma once

#include <cstddef>
#include <cstdint>

#include "trafficast/cells.hpp"
#include "trafficast/matrix.hpp"

namespace trafficast {

/// Gate weights act on the stacked column [h_{t-1}; x_t], so every W is
/// hidden x (hidden + input) and every b is hidden x 1.
struct LstmParams {
  Matrix w_f, w_i, w_c, w_o;
  Matrix b_f, b_i, b_c, b_o;

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  std::size_t hidden_dim() const noexcept { return w_f.rows(); }
  std::size_t input_dim() const noexcept { return w_f.cols() - w_f.rows(); }

  /// Throws ShapeError unless all eight matrices agree on one (input, hidden) pair.
  void validate() const;

  template <class F>
  void for_each(F&& f) {
    f("w_f", w_f); f("w_i", w_i); f("w_c", w_c); f("w_o", w_o);
    f("b_f", b_f); f("b_i", b_i); f("b_c", b_c); f("b_o", b_o);
  }
  template <class F>
  void for_each(F&& f) const {
    f("w_f", w_f); f("w_i", w_i); f("w_c", w_c); f("w_o", w_o);
    f("b_f", b_f); f("b_i", b_i); f("b_c", b_c); f("b_o", b_o);
  }

  friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

/// Everything one forward step produced that its backward pass needs.
/// Gates are stored post-activation.
struct LstmCache {
  Matrix concat;  // [h_{t-1}; x_t]
  Matrix c_prev;
  Matrix f, i, c_tilde, o;
  Matrix c;
  Matrix tanh_c;
  Matrix h;

  Matrix x() const;
  Matrix h_prev() const;
};

struct LstmStep {
  CellState next;
  LstmCache cache;
};

struct LstmGradients {
  LstmParams d_params;
  Matrix d_x;
  CellState d_prev;
};

/// Glorot-uniform gate weights, zero biases except the forget bias, which
/// starts at 1.
LstmParams lstm_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

LstmStep lstm_step(const LstmParams& p, const Matrix& x, const CellState& prev);

/// Reverse-mode pass through one step given upstream gradients on h_t and C_t.
LstmGradients lstm_backward(const LstmParams& p, const LstmCache& cache, const Matrix& d_h,
                            const Matrix& d_c);

}  // namespace trafficast
