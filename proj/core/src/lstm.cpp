#include "trafficast/lstm.hpp"

#include <string>

namespace trafficast {

namespace detail {

void check_dims(const char* op, std::size_t input_dim, std::size_t hidden_dim) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw std::invalid_argument(std::string(op) + ": dimensions must be >= 1 (input " +
                                std::to_string(input_dim) + ", hidden " +
                                std::to_string(hidden_dim) + ")");
  }
}

}  // namespace detail

namespace {

Matrix gate(const Matrix& w, const Matrix& b, const Matrix& concat, Activation act) {
  return map_fn(add_bias(matmul(w, concat), b), act);
}

void check_step_shapes(const char* op, std::size_t input_dim, std::size_t hidden,
                       const Matrix& x, const Matrix& h) {
  if (x.rows() != input_dim || h.rows() != hidden || x.cols() != h.cols()) {
    throw ShapeError(std::string(op) + ": expected x (" + std::to_string(input_dim) +
                     "xB) and h (" + std::to_string(hidden) + "xB), got x " +
                     x.shape_string() + " and h " + h.shape_string());
  }
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  const std::size_t k = hidden_dim + input_dim;
  LstmParams p;
  p.w_f = p.w_i = p.w_c = p.w_o = Matrix(hidden_dim, k);
  p.b_f = p.b_i = p.b_c = p.b_o = Matrix(hidden_dim, 1);
  return p;
}

void LstmParams::validate() const {
  const std::size_t hidden = w_f.rows();
  if (hidden == 0 || w_f.cols() <= hidden) {
    throw ShapeError("LstmParams: malformed w_f " + w_f.shape_string());
  }
  const Matrix wshape(hidden, w_f.cols());
  const Matrix bshape(hidden, 1);
  for_each([&](const char* name, const Matrix& m) {
    const Matrix& expect = name[0] == 'w' ? wshape : bshape;
    if (!m.same_shape(expect)) {
      throw ShapeError(std::string("LstmParams: ") + name + " is " + m.shape_string() +
                       ", expected " + expect.shape_string());
    }
  });
}

Matrix LstmCache::x() const { return split_rows(concat, h.rows()).second; }
Matrix LstmCache::h_prev() const { return split_rows(concat, h.rows()).first; }

LstmParams lstm_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) {
  detail::check_dims("lstm_init", input_dim, hidden_dim);
  std::mt19937_64 rng(seed);
  const std::size_t k = hidden_dim + input_dim;
  LstmParams p;
  p.w_f = detail::glorot_uniform(hidden_dim, k, rng);
  p.w_i = detail::glorot_uniform(hidden_dim, k, rng);
  p.w_c = detail::glorot_uniform(hidden_dim, k, rng);
  p.w_o = detail::glorot_uniform(hidden_dim, k, rng);
  p.b_f = Matrix(hidden_dim, 1, 1.0);
  p.b_i = p.b_c = p.b_o = Matrix(hidden_dim, 1);
  return p;
}

LstmStep lstm_step(const LstmParams& p, const Matrix& x, const CellState& prev) {
  check_step_shapes("lstm_step", p.input_dim(), p.hidden_dim(), x, prev.h);
  if (!prev.c.same_shape(prev.h)) {
    throw ShapeError("lstm_step: cell state " + prev.c.shape_string() +
                     " does not match hidden state " + prev.h.shape_string());
  }
  LstmCache cache;
  cache.concat = concat_rows(prev.h, x);
  cache.c_prev = prev.c;
  cache.f = gate(p.w_f, p.b_f, cache.concat, Activation::sigmoid);
  cache.i = gate(p.w_i, p.b_i, cache.concat, Activation::sigmoid);
  cache.c_tilde = gate(p.w_c, p.b_c, cache.concat, Activation::tanh);
  cache.c = hadamard(cache.f, prev.c) + hadamard(cache.i, cache.c_tilde);
  cache.o = gate(p.w_o, p.b_o, cache.concat, Activation::sigmoid);
  cache.tanh_c = map_fn(cache.c, Activation::tanh);
  cache.h = hadamard(cache.o, cache.tanh_c);
  CellState next{cache.h, cache.c};
  return {std::move(next), std::move(cache)};
}

LstmGradients lstm_backward(const LstmParams& p, const LstmCache& cache, const Matrix& d_h,
                            const Matrix& d_c) {
  if (!d_h.same_shape(cache.h) || !d_c.same_shape(cache.c)) {
    throw ShapeError("lstm_backward: upstream gradients " + d_h.shape_string() + "/" +
                     d_c.shape_string() + " do not match step state " +
                     cache.h.shape_string());
  }
  if (cache.concat.rows() != p.w_f.cols()) {
    throw ShapeError("lstm_backward: cache input " + cache.concat.shape_string() +
                     " does not match weights " + p.w_f.shape_string());
  }

  // h = o * tanh(C): the cell receives its direct gradient plus the path via h.
  const Matrix d_o = hadamard(d_h, cache.tanh_c);
  const Matrix d_cell =
      d_c + hadamard(hadamard(d_h, cache.o), map_fn(cache.tanh_c, Activation::tanh_deriv_from_output));

  const Matrix d_f = hadamard(d_cell, cache.c_prev);
  const Matrix d_i = hadamard(d_cell, cache.c_tilde);
  const Matrix d_ct = hadamard(d_cell, cache.i);

  const Matrix a_f = hadamard(d_f, map_fn(cache.f, Activation::sigmoid_deriv_from_output));
  const Matrix a_i = hadamard(d_i, map_fn(cache.i, Activation::sigmoid_deriv_from_output));
  const Matrix a_c = hadamard(d_ct, map_fn(cache.c_tilde, Activation::tanh_deriv_from_output));
  const Matrix a_o = hadamard(d_o, map_fn(cache.o, Activation::sigmoid_deriv_from_output));

  LstmGradients g;
  g.d_params.w_f = matmul_bt(a_f, cache.concat);
  g.d_params.w_i = matmul_bt(a_i, cache.concat);
  g.d_params.w_c = matmul_bt(a_c, cache.concat);
  g.d_params.w_o = matmul_bt(a_o, cache.concat);
  g.d_params.b_f = sum_columns(a_f);
  g.d_params.b_i = sum_columns(a_i);
  g.d_params.b_c = sum_columns(a_c);
  g.d_params.b_o = sum_columns(a_o);

  Matrix d_concat = matmul_at(p.w_f, a_f);
  accumulate(d_concat, matmul_at(p.w_i, a_i));
  accumulate(d_concat, matmul_at(p.w_c, a_c));
  accumulate(d_concat, matmul_at(p.w_o, a_o));

  auto [d_h_prev, d_x] = split_rows(d_concat, cache.h.rows());
  g.d_x = std::move(d_x);
  g.d_prev.h = std::move(d_h_prev);
  g.d_prev.c = hadamard(d_cell, cache.f);
  return g;
}

}  // namespace trafficast
