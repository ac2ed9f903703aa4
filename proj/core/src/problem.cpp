#include "ssqp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssqp {
namespace {

void require_dim(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want) {
    throw DimensionMismatch(what + ": expected size " + std::to_string(want) + ", got " +
                            std::to_string(got));
  }
}

Vector json_vector(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("QP file: missing '") + key + "'");
  return Vector(j.at(key).get<std::vector<double>>());
}

Matrix json_matrix(const nlohmann::json& j, const char* key, std::size_t cols) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("QP file: missing '") + key + "'");
  const auto rows = j.at(key).get<std::vector<std::vector<double>>>();
  std::vector<double> entries;
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw std::invalid_argument(std::string("QP file: row of '") + key + "' has " +
                                  std::to_string(r.size()) + " entries, expected " +
                                  std::to_string(cols));
    }
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(entries));
}

}  // namespace

double Problem::f(const Vector& x) const {
  require_dim(x.size(), n, name + " f");
  return eval_f(x);
}

Vector Problem::grad_f(const Vector& x) const {
  require_dim(x.size(), n, name + " grad_f");
  Vector g = eval_grad_f(x);
  require_dim(g.size(), n, name + " grad_f result");
  return g;
}

Vector Problem::c(const Vector& x) const {
  require_dim(x.size(), n, name + " c");
  Vector v = eval_c(x);
  require_dim(v.size(), m, name + " c result");
  return v;
}

Matrix Problem::jacobian(const Vector& x) const {
  require_dim(x.size(), n, name + " jacobian");
  Matrix j = eval_jacobian(x);
  if (j.rows() != m || j.cols() != n) {
    throw DimensionMismatch(name + " jacobian result: expected " + std::to_string(m) + "x" +
                            std::to_string(n));
  }
  return j;
}

Matrix Problem::hessian() const { return hessian_approx ? *hessian_approx : Matrix::identity(n); }

void Problem::validate() const {
  if (m > n) throw std::invalid_argument(name + ": more constraints than variables");
  if (!eval_f || !eval_grad_f || !eval_c || !eval_jacobian) {
    throw std::invalid_argument(name + ": missing evaluator");
  }
  require_dim(x0.size(), n, name + " x0");
  if (!all_finite(x0)) throw std::invalid_argument(name + ": x0 has non-finite entries");
  if (known_solution) require_dim(known_solution->size(), n, name + " known_solution");
  if (hessian_approx) {
    if (hessian_approx->rows() != n || hessian_approx->cols() != n ||
        !hessian_approx->is_symmetric()) {
      throw std::invalid_argument(name + ": hessian_approx must be symmetric n x n");
    }
  }
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& e : problem_suite()) names.push_back(e.problem.name);
  return names;
}

const SuiteEntry& get_suite_entry(std::string_view name) {
  const auto& suite = problem_suite();
  const auto it = std::find_if(suite.begin(), suite.end(),
                               [&](const SuiteEntry& e) { return e.problem.name == name; });
  if (it == suite.end()) throw UnknownProblem(std::string(name));
  return *it;
}

Problem get_problem(std::string_view name) { return get_suite_entry(name).problem; }

Problem make_quadratic_problem(std::string name, Matrix q_mat, Vector q_vec, Matrix a, Vector b,
                               Vector x0) {
  const std::size_t n = q_vec.size();
  const std::size_t m = b.size();
  if (q_mat.rows() != n || q_mat.cols() != n) throw DimensionMismatch(name + ": Q must be n x n");
  if (!q_mat.is_symmetric()) throw std::invalid_argument(name + ": Q must be symmetric");
  if (a.rows() != m || a.cols() != n) throw DimensionMismatch(name + ": A must be m x n");

  Problem p;
  p.name = std::move(name);
  p.n = n;
  p.m = m;
  p.eval_f = [q_mat, q_vec](const Vector& x) { return 0.5 * quadratic_form(q_mat, x) + dot(q_vec, x); };
  p.eval_grad_f = [q_mat, q_vec](const Vector& x) { return q_mat * x + q_vec; };
  p.eval_c = [a, b](const Vector& x) { return a * x - b; };
  p.eval_jacobian = [a](const Vector&) { return a; };
  p.x0 = std::move(x0);
  p.validate();
  return p;
}

Problem parse_quadratic_problem(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("QP file: ") + e.what());
  }
  static const std::vector<std::string> known = {"name", "Q", "q", "A", "b", "x0"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("QP file: unknown key '" + key + "'");
    }
  }
  try {
    Vector q = json_vector(j, "q");
    Vector b = json_vector(j, "b");
    Vector x0 = json_vector(j, "x0");
    Matrix q_mat = json_matrix(j, "Q", q.size());
    Matrix a = json_matrix(j, "A", q.size());
    const std::string name = j.value("name", std::string("qp"));
    return make_quadratic_problem(name, std::move(q_mat), std::move(q), std::move(a),
                                  std::move(b), std::move(x0));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("QP file: ") + e.what());
  }
}

Problem load_quadratic_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open QP file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_quadratic_problem(ss.str());
}

GradientCheck check_gradients(const Problem& p, const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("check_gradients: h must be positive");
  GradientCheck out;
  const Vector g = p.grad_f(x);
  const Matrix jac = p.jacobian(x);
  Vector xp = x;
  Vector xm = x;
  for (std::size_t i = 0; i < p.n; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fd = (p.f(xp) - p.f(xm)) / (2.0 * h);
    out.max_rel_err_grad =
        std::max(out.max_rel_err_grad, std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i])));
    const Vector cp = p.c(xp);
    const Vector cm = p.c(xm);
    for (std::size_t r = 0; r < p.m; ++r) {
      const double fdj = (cp[r] - cm[r]) / (2.0 * h);
      out.max_rel_err_jac = std::max(
          out.max_rel_err_jac, std::abs(jac(r, i) - fdj) / std::max(1.0, std::abs(jac(r, i))));
    }
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return out;
}

}  // namespace ssqp
