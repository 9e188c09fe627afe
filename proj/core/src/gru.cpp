#include "trafficast/gru.hpp"

#include <string>

namespace trafficast {

GruParams GruParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  const std::size_t k = hidden_dim + input_dim;
  GruParams p;
  p.w_r = p.w_z = p.w_h = Matrix(hidden_dim, k);
  p.b_r = p.b_z = p.b_h = Matrix(hidden_dim, 1);
  return p;
}

void GruParams::validate() const {
  const std::size_t hidden = w_r.rows();
  if (hidden == 0 || w_r.cols() <= hidden) {
    throw ShapeError("GruParams: malformed w_r " + w_r.shape_string());
  }
  const Matrix wshape(hidden, w_r.cols());
  const Matrix bshape(hidden, 1);
  for_each([&](const char* name, const Matrix& m) {
    const Matrix& expect = name[0] == 'w' ? wshape : bshape;
    if (!m.same_shape(expect)) {
      throw ShapeError(std::string("GruParams: ") + name + " is " + m.shape_string() +
                       ", expected " + expect.shape_string());
    }
  });
}

Matrix GruCache::x() const { return split_rows(concat, h.rows()).second; }
Matrix GruCache::h_prev() const { return split_rows(concat, h.rows()).first; }

GruParams gru_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) {
  detail::check_dims("gru_init", input_dim, hidden_dim);
  std::mt19937_64 rng(seed);
  const std::size_t k = hidden_dim + input_dim;
  GruParams p;
  p.w_r = detail::glorot_uniform(hidden_dim, k, rng);
  p.w_z = detail::glorot_uniform(hidden_dim, k, rng);
  p.w_h = detail::glorot_uniform(hidden_dim, k, rng);
  p.b_r = p.b_z = p.b_h = Matrix(hidden_dim, 1);
  return p;
}

GruStep gru_step(const GruParams& p, const Matrix& x, const CellState& prev) {
  if (x.rows() != p.input_dim() || prev.h.rows() != p.hidden_dim() ||
      x.cols() != prev.h.cols()) {
    throw ShapeError("gru_step: expected x (" + std::to_string(p.input_dim()) + "xB) and h (" +
                     std::to_string(p.hidden_dim()) + "xB), got x " + x.shape_string() +
                     " and h " + prev.h.shape_string());
  }
  GruCache cache;
  cache.concat = concat_rows(prev.h, x);
  cache.r = map_fn(add_bias(matmul(p.w_r, cache.concat), p.b_r), Activation::sigmoid);
  cache.z = map_fn(add_bias(matmul(p.w_z, cache.concat), p.b_z), Activation::sigmoid);
  cache.concat_reset = concat_rows(hadamard(prev.h, cache.r), x);
  cache.h_tilde =
      map_fn(add_bias(matmul(p.w_h, cache.concat_reset), p.b_h), Activation::tanh);
  cache.h = hadamard(cache.z, prev.h) + hadamard(one_minus(cache.z), cache.h_tilde);
  CellState next{cache.h, Matrix()};
  return {std::move(next), std::move(cache)};
}

GruGradients gru_backward(const GruParams& p, const GruCache& cache, const Matrix& d_h) {
  if (!d_h.same_shape(cache.h)) {
    throw ShapeError("gru_backward: upstream gradient " + d_h.shape_string() +
                     " does not match step state " + cache.h.shape_string());
  }
  if (cache.concat.rows() != p.w_r.cols()) {
    throw ShapeError("gru_backward: cache input " + cache.concat.shape_string() +
                     " does not match weights " + p.w_r.shape_string());
  }
  const std::size_t hidden = cache.h.rows();
  const Matrix h_prev = cache.h_prev();

  Matrix d_h_prev = hadamard(d_h, cache.z);
  const Matrix d_z = hadamard(d_h, h_prev - cache.h_tilde);
  const Matrix d_ht = hadamard(d_h, one_minus(cache.z));

  // Candidate branch; its input carries h_{t-1} * r, which feeds both r and h_{t-1}.
  const Matrix a_h = hadamard(d_ht, map_fn(cache.h_tilde, Activation::tanh_deriv_from_output));
  auto [d_hr, d_x] = split_rows(matmul_at(p.w_h, a_h), hidden);
  accumulate(d_h_prev, hadamard(d_hr, cache.r));
  const Matrix d_r = hadamard(d_hr, h_prev);

  const Matrix a_r = hadamard(d_r, map_fn(cache.r, Activation::sigmoid_deriv_from_output));
  const Matrix a_z = hadamard(d_z, map_fn(cache.z, Activation::sigmoid_deriv_from_output));

  Matrix d_concat = matmul_at(p.w_r, a_r);
  accumulate(d_concat, matmul_at(p.w_z, a_z));
  auto [d_h_gates, d_x_gates] = split_rows(d_concat, hidden);
  accumulate(d_h_prev, d_h_gates);
  accumulate(d_x, d_x_gates);

  GruGradients g;
  g.d_params.w_r = matmul_bt(a_r, cache.concat);
  g.d_params.w_z = matmul_bt(a_z, cache.concat);
  g.d_params.w_h = matmul_bt(a_h, cache.concat_reset);
  g.d_params.b_r = sum_columns(a_r);
  g.d_params.b_z = sum_columns(a_z);
  g.d_params.b_h = sum_columns(a_h);
  g.d_x = std::move(d_x);
  g.d_prev_h = std::move(d_h_prev);
  return g;
}

}  // namespace trafficast
