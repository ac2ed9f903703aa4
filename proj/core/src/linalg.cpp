#include "ssqp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace ssqp {
namespace {

constexpr double kPivotTolerance = 1e-14;

void require_same_size(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": vector sizes " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()) + " differ");
  }
}

void require_square_system(const Matrix& a, const Vector& b, const char* what) {
  if (!a.square() || a.rows() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": expected square system, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " with rhs of size " + std::to_string(b.size()));
  }
}

#ifdef SSQP_CHECKED_SOLVES
void check_residual(const Matrix& a, const Vector& x, const Vector& b, const char* what) {
  const double r = norm_inf(residual(a, x, b));
  const double bound = 1e-10 * (1.0 + a.max_abs() * norm_inf(x));
  if (!(r <= bound)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: residual %.3e exceeds bound %.3e", what, r, bound);
    throw LinearAlgebraError(buf);
  }
}
#endif

}  // namespace

Vector operator+(const Vector& a, const Vector& b) {
  require_same_size(a, b, "operator+");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_size(a, b, "operator-");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector operator-(const Vector& a) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

Vector operator*(double s, const Vector& a) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vector stack(const Vector& a, const Vector& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Vector(std::move(out));
}

Norms norms(const Vector& v) {
  Norms n;
  double sq = 0.0;
  for (double x : v) {
    const double ax = std::abs(x);
    n.l1 += ax;
    sq += x * x;
    n.linf = std::max(n.linf, ax);
  }
  n.l2 = std::sqrt(sq);
  return n;
}

double norm_l1(const Vector& v) { return norms(v).l1; }
double norm_l2(const Vector& v) { return norms(v).l2; }
double norm_inf(const Vector& v) { return norms(v).linf; }

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), a_(std::move(row_major)) {
  if (a_.size() != rows_ * cols_) {
    throw DimensionMismatch("Matrix: " + std::to_string(a_.size()) + " entries for a " +
                            std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("Matrix::from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(entries));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_symmetric() const {
  if (!square()) return false;
  const double tol = 1e-12 * std::max(1.0, max_abs());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

Vector operator*(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw DimensionMismatch("Matrix * Vector: size mismatch");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    out[i] = s;
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("Matrix * Matrix: size mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vector multiply_transposed(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) throw DimensionMismatch("multiply_transposed: size mismatch");
  Vector out(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += row[j] * x[i];
  }
  return out;
}

Matrix gram_rows(const Matrix& a) {
  Matrix g(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ri = a.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto rj = a.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += ri[k] * rj[k];
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

double quadratic_form(const Matrix& a, const Vector& x) { return dot(x, a * x); }

Vector residual(const Matrix& a, const Vector& x, const Vector& b) { return a * x - b; }

Vector lu_solve(const Matrix& a, const Vector& b) {
  require_square_system(a, b, "lu_solve");
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  const double tol = kPivotTolerance * scale;

  Matrix lu = a;
  Vector x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        p = i;
      }
    }
    if (scale == 0.0 || best < tol || !std::isfinite(best)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "lu_solve: pivot %.3e in column %zu below %.3e", best, k,
                    tol);
      throw SingularMatrix(buf);
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(x[k], x[p]);
    }
    const double pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu(i, k) / pivot;
      lu(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
      x[i] -= l * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
#ifdef SSQP_CHECKED_SOLVES
  check_residual(a, x, b, "lu_solve");
#endif
  return x;
}

Vector cholesky_solve(const Matrix& a, const Vector& b) {
  require_square_system(a, b, "cholesky_solve");
  if (!a.is_symmetric()) throw std::invalid_argument("cholesky_solve: matrix is not symmetric");
  const std::size_t n = a.rows();
  const double tol = kPivotTolerance * a.max_abs();

  // Lower factor, stored in the lower triangle.
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > tol)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "cholesky_solve: diagonal entry %.3e in column %zu below %.3e",
                    d, j, tol);
      throw NotPositiveDefinite(buf);
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }

  Vector x = b;
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
#ifdef SSQP_CHECKED_SOLVES
  check_residual(a, x, b, "cholesky_solve");
#endif
  return x;
}

}  // namespace ssqp
