#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trafficast {

/// Raised when operand shapes do not satisfy an operation's contract.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of doubles.
///
/// Recurrent code keeps the batch along the columns: an input step is
/// (features x batch) and a hidden state is (hidden x batch), so every
/// gate pre-activation is one product W * [h; x].
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Builds a matrix from nested row lists; all rows must have equal length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::span<const double> values);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string shape_string() const;

  void fill(double v) noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Elementwise { add, sub, hadamard };

enum class Activation {
  sigmoid,
  tanh,
  /// Takes y = sigmoid(x) and returns y (1 - y).
  sigmoid_deriv_from_output,
  /// Takes y = tanh(x) and returns 1 - y^2.
  tanh_deriv_from_output,
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// a * b^T without materializing the transpose.
Matrix matmul_bt(const Matrix& a, const Matrix& b);
/// a^T * b without materializing the transpose.
Matrix matmul_at(const Matrix& a, const Matrix& b);

Matrix elementwise(const Matrix& a, const Matrix& b, Elementwise op);
Matrix map_fn(const Matrix& a, Activation f);

/// Stacks h above x. Both must have the same column count.
Matrix concat_rows(const Matrix& h, const Matrix& x);
/// Inverse of concat_rows: the first `top_rows` rows, then the rest.
std::pair<Matrix, Matrix> split_rows(const Matrix& m, std::size_t top_rows);

/// Adds a (rows x 1) bias to every column of m. The only broadcast we allow.
Matrix add_bias(const Matrix& m, const Matrix& bias);
/// Row sums as a (rows x 1) column; the adjoint of add_bias.
Matrix sum_columns(const Matrix& m);

Matrix transpose(const Matrix& m);
Matrix scale(const Matrix& m, double factor);
/// 1 - m, entrywise.
Matrix one_minus(const Matrix& m);

/// acc += m. Shapes must agree.
void accumulate(Matrix& acc, const Matrix& m);

inline Matrix operator+(const Matrix& a, const Matrix& b) { return elementwise(a, b, Elementwise::add); }
inline Matrix operator-(const Matrix& a, const Matrix& b) { return elementwise(a, b, Elementwise::sub); }
inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, Elementwise::hadamard);
}

double sigmoid(double x) noexcept;

}  // namespace trafficast
