// Built-in equality-constrained test problems. Most are Hock-Schittkowski
// problems with analytic derivatives; SPHERE20 and QP30 are scalable
// instances with closed-form or directly computable solutions.

#include <cmath>
#include <numbers>

#include "ssqp/problem.hpp"

namespace ssqp {
namespace {

using std::numbers::sqrt2;

Problem make(std::string name, std::size_t n, std::size_t m, Vector x0,
             std::function<double(const Vector&)> f, std::function<Vector(const Vector&)> g,
             std::function<Vector(const Vector&)> c, std::function<Matrix(const Vector&)> jac) {
  Problem p;
  p.name = std::move(name);
  p.n = n;
  p.m = m;
  p.x0 = std::move(x0);
  p.eval_f = std::move(f);
  p.eval_grad_f = std::move(g);
  p.eval_c = std::move(c);
  p.eval_jacobian = std::move(jac);
  return p;
}

// Linear objective on a circle: min x1 + x2 s.t. x1^2 + x2^2 = 2.
SuiteEntry p1() {
  Problem p = make(
      "P1", 2, 1, Vector{-1.5, 0.5}, [](const Vector& x) { return x[0] + x[1]; },
      [](const Vector&) { return Vector{1.0, 1.0}; },
      [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1] - 2.0}; },
      [](const Vector& x) { return Matrix::from_rows({{2.0 * x[0], 2.0 * x[1]}}); });
  p.known_solution = Vector{-1.0, -1.0};
  return {std::move(p), KktPoint{Vector{-1.0, -1.0}, Vector{0.5}}};
}

// Minimum-norm point on x1 + x2 = 2.
SuiteEntry p2() {
  Problem p = make_quadratic_problem("P2", Matrix::identity(2), Vector{0.0, 0.0},
                                     Matrix::from_rows({{1.0, 1.0}}), Vector{2.0},
                                     Vector{3.0, -1.0});
  p.known_solution = Vector{1.0, 1.0};
  return {std::move(p), KktPoint{Vector{1.0, 1.0}, Vector{-1.0}}};
}

// Rosenbrock on the circle of radius sqrt(2). H is the objective Hessian at
// the solution; with H = I the admissible step is too short for the
// constraint to be restored within the iteration budget.
SuiteEntry p3() {
  Problem p = make(
      "P3", 2, 1, Vector{0.8, 1.2},
      [](const Vector& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
      },
      [](const Vector& x) {
        const double b = x[1] - x[0] * x[0];
        return Vector{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
      },
      [](const Vector& x) { return Vector{x[0] * x[0] + x[1] * x[1] - 2.0}; },
      [](const Vector& x) { return Matrix::from_rows({{2.0 * x[0], 2.0 * x[1]}}); });
  p.hessian_approx = Matrix::from_rows({{802.0, -400.0}, {-400.0, 200.0}});
  p.known_solution = Vector{1.0, 1.0};
  return {std::move(p), KktPoint{Vector{1.0, 1.0}, Vector{0.0}}};
}

SuiteEntry hs6() {
  Problem p = make(
      "HS6", 2, 1, Vector{-1.2, 1.0},
      [](const Vector& x) { return (1.0 - x[0]) * (1.0 - x[0]); },
      [](const Vector& x) { return Vector{-2.0 * (1.0 - x[0]), 0.0}; },
      [](const Vector& x) { return Vector{10.0 * (x[1] - x[0] * x[0])}; },
      [](const Vector& x) { return Matrix::from_rows({{-20.0 * x[0], 10.0}}); });
  p.known_solution = Vector{1.0, 1.0};
  return {std::move(p), KktPoint{Vector{1.0, 1.0}, Vector{0.0}}};
}

SuiteEntry hs7() {
  Problem p = make(
      "HS7", 2, 1, Vector{2.0, 2.0},
      [](const Vector& x) { return std::log(1.0 + x[0] * x[0]) - x[1]; },
      [](const Vector& x) { return Vector{2.0 * x[0] / (1.0 + x[0] * x[0]), -1.0}; },
      [](const Vector& x) {
        const double s = 1.0 + x[0] * x[0];
        return Vector{s * s + x[1] * x[1] - 4.0};
      },
      [](const Vector& x) {
        const double s = 1.0 + x[0] * x[0];
        return Matrix::from_rows({{4.0 * x[0] * s, 2.0 * x[1]}});
      });
  const double sqrt3 = std::sqrt(3.0);
  p.known_solution = Vector{0.0, sqrt3};
  return {std::move(p), KktPoint{Vector{0.0, sqrt3}, Vector{1.0 / (2.0 * sqrt3)}}};
}

SuiteEntry hs27() {
  Problem p = make(
      "HS27", 3, 1, Vector{2.0, 2.0, 2.0},
      [](const Vector& x) {
        const double b = x[1] - x[0] * x[0];
        return 0.01 * (x[0] - 1.0) * (x[0] - 1.0) + b * b;
      },
      [](const Vector& x) {
        const double b = x[1] - x[0] * x[0];
        return Vector{0.02 * (x[0] - 1.0) - 4.0 * x[0] * b, 2.0 * b, 0.0};
      },
      [](const Vector& x) { return Vector{x[0] + x[2] * x[2] + 1.0}; },
      [](const Vector& x) { return Matrix::from_rows({{1.0, 0.0, 2.0 * x[2]}}); });
  p.known_solution = Vector{-1.0, 1.0, 0.0};
  return {std::move(p), KktPoint{Vector{-1.0, 1.0, 0.0}, Vector{0.04}}};
}

SuiteEntry hs28() {
  Problem p = make(
      "HS28", 3, 1, Vector{-4.0, 1.0, 1.0},
      [](const Vector& x) {
        const double a = x[0] + x[1];
        const double b = x[1] + x[2];
        return a * a + b * b;
      },
      [](const Vector& x) {
        const double a = x[0] + x[1];
        const double b = x[1] + x[2];
        return Vector{2.0 * a, 2.0 * a + 2.0 * b, 2.0 * b};
      },
      [](const Vector& x) { return Vector{x[0] + 2.0 * x[1] + 3.0 * x[2] - 1.0}; },
      [](const Vector&) { return Matrix::from_rows({{1.0, 2.0, 3.0}}); });
  p.known_solution = Vector{0.5, -0.5, 0.5};
  return {std::move(p), KktPoint{Vector{0.5, -0.5, 0.5}, Vector{0.0}}};
}

SuiteEntry hs40() {
  Problem p = make(
      "HS40", 4, 3, Vector{0.8, 0.8, 0.8, 0.8},
      [](const Vector& x) { return -x[0] * x[1] * x[2] * x[3]; },
      [](const Vector& x) {
        return Vector{-x[1] * x[2] * x[3], -x[0] * x[2] * x[3], -x[0] * x[1] * x[3],
                      -x[0] * x[1] * x[2]};
      },
      [](const Vector& x) {
        return Vector{x[0] * x[0] * x[0] + x[1] * x[1] - 1.0, x[0] * x[0] * x[3] - x[2],
                      x[3] * x[3] - x[1]};
      },
      [](const Vector& x) {
        return Matrix::from_rows({{3.0 * x[0] * x[0], 2.0 * x[1], 0.0, 0.0},
                                  {2.0 * x[0] * x[3], 0.0, -1.0, x[0] * x[0]},
                                  {0.0, -1.0, 0.0, 2.0 * x[3]}});
      });
  const Vector xs{std::pow(2.0, -1.0 / 3.0), std::pow(2.0, -0.5), std::pow(2.0, -11.0 / 12.0),
                  std::pow(2.0, -0.25)};
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, Vector{0.5, -std::pow(2.0, 11.0 / 12.0) / 4.0, sqrt2 / 4.0}}};
}

SuiteEntry hs42() {
  Problem p = make(
      "HS42", 4, 2, Vector{1.0, 1.0, 1.0, 1.0},
      [](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) s += (x[i] - (i + 1.0)) * (x[i] - (i + 1.0));
        return s;
      },
      [](const Vector& x) {
        Vector g(4);
        for (std::size_t i = 0; i < 4; ++i) g[i] = 2.0 * (x[i] - (i + 1.0));
        return g;
      },
      [](const Vector& x) { return Vector{x[0] - 2.0, x[2] * x[2] + x[3] * x[3] - 2.0}; },
      [](const Vector& x) {
        return Matrix::from_rows({{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 2.0 * x[2], 2.0 * x[3]}});
      });
  const Vector xs{2.0, 2.0, 0.6 * sqrt2, 0.8 * sqrt2};
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, Vector{-2.0, 5.0 / sqrt2 - 1.0}}};
}

SuiteEntry hs48() {
  Problem p = make(
      "HS48", 5, 2, Vector{3.0, 5.0, -3.0, 2.0, -2.0},
      [](const Vector& x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - x[2]) * (x[1] - x[2]) +
               (x[3] - x[4]) * (x[3] - x[4]);
      },
      [](const Vector& x) {
        return Vector{2.0 * (x[0] - 1.0), 2.0 * (x[1] - x[2]), -2.0 * (x[1] - x[2]),
                      2.0 * (x[3] - x[4]), -2.0 * (x[3] - x[4])};
      },
      [](const Vector& x) {
        return Vector{x[0] + x[1] + x[2] + x[3] + x[4] - 5.0, x[2] - 2.0 * (x[3] + x[4]) + 3.0};
      },
      [](const Vector&) {
        return Matrix::from_rows({{1.0, 1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 1.0, -2.0, -2.0}});
      });
  const Vector xs(5, 1.0);
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, Vector{0.0, 0.0}}};
}

SuiteEntry hs51() {
  Problem p = make(
      "HS51", 5, 3, Vector{2.5, 0.5, 2.0, -1.0, 0.5},
      [](const Vector& x) {
        const double a = x[0] - x[1];
        const double b = x[1] + x[2] - 2.0;
        return a * a + b * b + (x[3] - 1.0) * (x[3] - 1.0) + (x[4] - 1.0) * (x[4] - 1.0);
      },
      [](const Vector& x) {
        const double a = x[0] - x[1];
        const double b = x[1] + x[2] - 2.0;
        return Vector{2.0 * a, -2.0 * a + 2.0 * b, 2.0 * b, 2.0 * (x[3] - 1.0),
                      2.0 * (x[4] - 1.0)};
      },
      [](const Vector& x) {
        return Vector{x[0] + 3.0 * x[1] - 4.0, x[2] + x[3] - 2.0 * x[4], x[1] - x[4]};
      },
      [](const Vector&) {
        return Matrix::from_rows({{1.0, 3.0, 0.0, 0.0, 0.0},
                                  {0.0, 0.0, 1.0, 1.0, -2.0},
                                  {0.0, 1.0, 0.0, 0.0, -1.0}});
      });
  const Vector xs(5, 1.0);
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, Vector{0.0, 0.0, 0.0}}};
}

// Nearest point to a fixed anchor on a product of ten unit circles.
SuiteEntry sphere20() {
  constexpr std::size_t n = 20;
  constexpr std::size_t m = n / 2;
  Vector anchor(n);
  for (std::size_t i = 0; i < n; ++i) {
    anchor[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.5 + 0.5 * std::sin(i + 1.0));
  }
  Problem p = make(
      "SPHERE20", n, m, Vector(n, 0.5),
      [anchor](const Vector& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (x[i] - anchor[i]) * (x[i] - anchor[i]);
        return s;
      },
      [anchor](const Vector& x) { return 2.0 * (x - anchor); },
      [](const Vector& x) {
        Vector c(m);
        for (std::size_t j = 0; j < m; ++j) {
          c[j] = x[2 * j] * x[2 * j] + x[2 * j + 1] * x[2 * j + 1] - 1.0;
        }
        return c;
      },
      [](const Vector& x) {
        Matrix jac(m, n);
        for (std::size_t j = 0; j < m; ++j) {
          jac(j, 2 * j) = 2.0 * x[2 * j];
          jac(j, 2 * j + 1) = 2.0 * x[2 * j + 1];
        }
        return jac;
      });
  Vector xs(n);
  Vector ys(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double r = std::hypot(anchor[2 * j], anchor[2 * j + 1]);
    xs[2 * j] = anchor[2 * j] / r;
    xs[2 * j + 1] = anchor[2 * j + 1] / r;
    ys[j] = r - 1.0;
  }
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, ys}};
}

// Diagonal strongly convex QP with ten dense linear constraints.
SuiteEntry qp30() {
  constexpr std::size_t n = 30;
  constexpr std::size_t m = 10;
  Matrix q_mat(n, n);
  Vector q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q_mat(i, i) = 0.5 + 1.5 * static_cast<double>((7 * i) % n) / (n - 1);
    q[i] = std::cos(1.3 * i);
  }
  Matrix a(m, n);
  Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = std::sin(0.7 * (i + 1.0) * (j + 1.0) + 0.3 * i) + (j == 3 * i ? 1.5 : 0.0);
    }
    b[i] = std::sin(2.1 * i) + 0.5;
  }

  // Solution of [Q A^T; A 0][x; y] = [-q; b].
  Matrix kkt(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i) kkt(i, i) = q_mat(i, i);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      kkt(n + i, j) = a(i, j);
      kkt(j, n + i) = a(i, j);
    }
  const Vector sol = lu_solve(kkt, stack(-q, b));
  Vector xs(n);
  Vector ys(m);
  for (std::size_t i = 0; i < n; ++i) xs[i] = sol[i];
  for (std::size_t i = 0; i < m; ++i) ys[i] = sol[n + i];

  Problem p = make_quadratic_problem("QP30", std::move(q_mat), std::move(q), std::move(a),
                                     std::move(b), Vector(n, 0.0));
  p.known_solution = xs;
  return {std::move(p), KktPoint{xs, ys}};
}

std::vector<SuiteEntry> build_suite() {
  std::vector<SuiteEntry> suite;
  suite.push_back(p1());
  suite.push_back(p2());
  suite.push_back(p3());
  suite.push_back(hs6());
  suite.push_back(hs7());
  suite.push_back(hs27());
  suite.push_back(hs28());
  suite.push_back(hs40());
  suite.push_back(hs42());
  suite.push_back(hs48());
  suite.push_back(hs51());
  suite.push_back(sphere20());
  suite.push_back(qp30());
  for (const auto& e : suite) e.problem.validate();
  return suite;
}

}  // namespace

const std::vector<SuiteEntry>& problem_suite() {
  static const std::vector<SuiteEntry> suite = build_suite();
  return suite;
}

}  // namespace ssqp
