#include "trafficast/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trafficast {
namespace {

// Saturated activations are pulled back inside the open interval so the
// gate bounds hold for every finite input, not just moderate ones.
constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;
constexpr double kAboveZero = std::numeric_limits<double>::denorm_min();

[[noreturn]] void shape_fail(const char* op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                   b.shape_string());
}

double bounded_tanh(double x) noexcept {
  return std::clamp(std::tanh(x), -kBelowOne, kBelowOne);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("Matrix: " + std::to_string(data_.size()) + " values for shape " +
                     shape_string());
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

void Matrix::fill(double v) noexcept { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

// Every output entry accumulates over the inner dimension in the same order
// no matter how many columns b has, so a batched product is bit-identical to
// the per-column products.
Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_fail("matmul", a, b);
  const std::size_t n = b.cols();
  Matrix out(a.rows(), n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* dst = out.row(i).data();
    const double* arow = a.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = arow[k];
      const double* src = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_fail("matmul_bt", a, b);
  Matrix out(a.rows(), b.rows());
  const std::size_t inner = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row(j).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += arow[k] * brow[k];
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_fail("matmul_at", a, b);
  const std::size_t n = b.cols();
  Matrix out(a.cols(), n);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* arow = a.row(k).data();
    const double* src = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      double* dst = out.row(i).data();
      for (std::size_t j = 0; j < n; ++j) dst[j] += aki * src[j];
    }
  }
  return out;
}

Matrix elementwise(const Matrix& a, const Matrix& b, Elementwise op) {
  if (!a.same_shape(b)) shape_fail("elementwise", a, b);
  Matrix out(a.rows(), a.cols());
  auto x = a.values();
  auto y = b.values();
  auto dst = out.values();
  switch (op) {
    case Elementwise::add:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = x[i] + y[i];
      break;
    case Elementwise::sub:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = x[i] - y[i];
      break;
    case Elementwise::hadamard:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = x[i] * y[i];
      break;
  }
  return out;
}

double sigmoid(double x) noexcept {
  double y;
  if (x >= 0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::clamp(y, kAboveZero, kBelowOne);
}

Matrix map_fn(const Matrix& a, Activation f) {
  Matrix out(a.rows(), a.cols());
  auto src = a.values();
  auto dst = out.values();
  switch (f) {
    case Activation::sigmoid:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = sigmoid(src[i]);
      break;
    case Activation::tanh:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = bounded_tanh(src[i]);
      break;
    case Activation::sigmoid_deriv_from_output:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * (1.0 - src[i]);
      break;
    case Activation::tanh_deriv_from_output:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 1.0 - src[i] * src[i];
      break;
  }
  return out;
}

Matrix concat_rows(const Matrix& h, const Matrix& x) {
  if (h.cols() != x.cols()) shape_fail("concat_rows", h, x);
  std::vector<double> data;
  data.reserve(h.size() + x.size());
  data.insert(data.end(), h.values().begin(), h.values().end());
  data.insert(data.end(), x.values().begin(), x.values().end());
  return Matrix(h.rows() + x.rows(), x.cols(), std::move(data));
}

std::pair<Matrix, Matrix> split_rows(const Matrix& m, std::size_t top_rows) {
  if (top_rows > m.rows()) {
    throw ShapeError("split_rows: cannot take " + std::to_string(top_rows) + " rows from " +
                     m.shape_string());
  }
  const auto all = m.values();
  const auto cut = all.begin() + static_cast<std::ptrdiff_t>(top_rows * m.cols());
  return {Matrix(top_rows, m.cols(), std::vector<double>(all.begin(), cut)),
          Matrix(m.rows() - top_rows, m.cols(), std::vector<double>(cut, all.end()))};
}

Matrix add_bias(const Matrix& m, const Matrix& bias) {
  if (bias.cols() != 1 || bias.rows() != m.rows()) shape_fail("add_bias", m, bias);
  Matrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double b = bias(r, 0);
    for (double& v : out.row(r)) v += b;
  }
  return out;
}

Matrix sum_columns(const Matrix& m) {
  Matrix out(m.rows(), 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = 0.0;
    for (double v : m.row(r)) acc += v;
    out(r, 0) = acc;
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix scale(const Matrix& m, double factor) {
  Matrix out = m;
  for (double& v : out.values()) v *= factor;
  return out;
}

Matrix one_minus(const Matrix& m) {
  Matrix out = m;
  for (double& v : out.values()) v = 1.0 - v;
  return out;
}

void accumulate(Matrix& acc, const Matrix& m) {
  if (!acc.same_shape(m)) shape_fail("accumulate", acc, m);
  auto dst = acc.values();
  auto src = m.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace trafficast
