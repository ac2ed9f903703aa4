#pragma once

// Conversions to Eigen, which serves as the independent reference in tests.

#include <Eigen/Dense>

#include "ssqp/linalg.hpp"

namespace ssqp::testing {

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  Eigen::VectorXd e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e(i) = v[i];
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& m) {
  Matrix a(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  return a;
}

inline Vector from_eigen(const Eigen::VectorXd& e) {
  Vector v(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) v[i] = e(i);
  return v;
}

inline double cond2(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

inline double sigma_min(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace ssqp::testing
