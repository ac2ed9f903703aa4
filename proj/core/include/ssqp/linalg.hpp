#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssqp {

class LinearAlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by lu_solve when a pivot falls below 1e-14 * max|A_ij|.
class SingularMatrix : public LinearAlgebraError {
 public:
  using LinearAlgebraError::LinearAlgebraError;
};

/// Raised by cholesky_solve when a diagonal factor entry falls below
/// 1e-14 * max|A_ij|.
class NotPositiveDefinite : public LinearAlgebraError {
 public:
  using LinearAlgebraError::LinearAlgebraError;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense vector of doubles. The length is fixed at construction.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : v_(n, value) {}
  Vector(std::initializer_list<double> values) : v_(values) {}
  explicit Vector(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  std::span<double> span() { return v_; }
  std::span<const double> span() const { return v_; }
  const std::vector<double>& values() const { return v_; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> v_;
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(double s, const Vector& a);

double dot(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

/// Concatenates a and b.
Vector stack(const Vector& a, const Vector& b);

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

Norms norms(const Vector& v);
double norm_l1(const Vector& v);
double norm_l2(const Vector& v);
double norm_inf(const Vector& v);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, value) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  /// Builds a matrix from a list of rows; every row must have the same length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(a_).subspan(i * cols_, cols_);
  }
  const std::vector<double>& values() const { return a_; }

  double max_abs() const;
  Matrix transposed() const;

  /// |A_ij - A_ji| <= 1e-12 * max(1, max|A|).
  bool is_symmetric() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Vector operator*(const Matrix& a, const Vector& x);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Returns A^T x without forming the transpose.
Vector multiply_transposed(const Matrix& a, const Vector& x);

/// Returns A A^T.
Matrix gram_rows(const Matrix& a);

/// Returns x^T A x.
double quadratic_form(const Matrix& a, const Vector& x);

/// Returns A x - b.
Vector residual(const Matrix& a, const Vector& x, const Vector& b);

/// Solves A x = b by LU with partial pivoting.
Vector lu_solve(const Matrix& a, const Vector& b);

/// Solves A x = b for symmetric positive definite A.
Vector cholesky_solve(const Matrix& a, const Vector& b);

}  // namespace ssqp
