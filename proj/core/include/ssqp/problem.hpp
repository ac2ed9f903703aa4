#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/linalg.hpp"

namespace ssqp {

class UnknownProblem : public std::invalid_argument {
 public:
  explicit UnknownProblem(const std::string& name)
      : std::invalid_argument("unknown problem '" + name + "'") {}
};

/// Equality-constrained NLP: min f(x) s.t. c(x) = 0 with x in R^n, c: R^n -> R^m.
///
/// The evaluators are exact and must be pure; they are shared read-only
/// across concurrent solves.
struct Problem {
  std::string name;
  std::size_t n = 0;
  std::size_t m = 0;
  std::function<double(const Vector&)> eval_f;
  std::function<Vector(const Vector&)> eval_grad_f;
  std::function<Vector(const Vector&)> eval_c;
  std::function<Matrix(const Vector&)> eval_jacobian;  // m x n, rows are constraint gradients
  Vector x0;
  std::optional<Vector> known_solution;
  /// Constant H used in the Newton-KKT system; the identity when absent.
  std::optional<Matrix> hessian_approx;

  double f(const Vector& x) const;
  Vector grad_f(const Vector& x) const;
  Vector c(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;
  Matrix hessian() const;

  /// Throws std::invalid_argument when dimensions or x0 are inconsistent.
  void validate() const;
};

struct KktPoint {
  Vector x;
  Vector y;
};

struct SuiteEntry {
  Problem problem;
  std::optional<KktPoint> reference_kkt_point;
};

/// Built-in test problems, in registration order.
const std::vector<SuiteEntry>& problem_suite();
std::vector<std::string> problem_names();
const SuiteEntry& get_suite_entry(std::string_view name);
Problem get_problem(std::string_view name);

/// min 1/2 x^T Q x + q^T x  s.t.  A x = b.
Problem make_quadratic_problem(std::string name, Matrix q_mat, Vector q_vec, Matrix a, Vector b,
                               Vector x0);

/// Reads a QP from JSON: {name, Q, q, A, b, x0}. Matrices are arrays of rows.
Problem load_quadratic_problem(const std::filesystem::path& path);
Problem parse_quadratic_problem(std::string_view json_text);

struct GradientCheck {
  double max_rel_err_grad = 0.0;
  double max_rel_err_jac = 0.0;
};

/// Compares analytic derivatives against central differences with step h.
/// Relative error per entry is |analytic - fd| / max(1, |analytic|).
GradientCheck check_gradients(const Problem& p, const Vector& x, double h = 1e-6);

}  // namespace ssqp
