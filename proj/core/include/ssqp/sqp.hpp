#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/linalg.hpp"
#include "ssqp/oracles.hpp"
#include "ssqp/problem.hpp"

namespace ssqp {

/// User-set constants of the step-search SQP method plus termination and
/// budget settings. Defaults are the values used in the reference experiments.
struct SolverParams {
  double tau_init = 0.1;  // initial merit parameter, > 0
  double sigma = 0.1;     // (0,1)
  double eps_tau = 1e-2;  // (0,1)
  double theta = 1e-4;    // (0,1)
  double gamma = 0.5;     // (0,1)
  double alpha_max = 1.0;
  double alpha0 = 1.0;
  /// Relaxation constant of the acceptance test. When unset, the oracle's
  /// eps_f_noise is used.
  std::optional<double> eps_f_accept;
  std::size_t max_iters = 1000;
  double tol_infeas = 1e-6;
  double tol_kkt = 1e-4;
  /// Compute exact-value diagnostics (true/false classification and the
  /// exact-gradient model reduction) every iteration.
  bool diagnostics = true;
  /// Diagnostic constants for iteration classification.
  double kappa_fo = 1.0;
  std::optional<double> eps_g_classify;  // defaults to the oracle's eps_g_noise

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double effective_eps_f(const OracleConfig& oracle) const {
    return eps_f_accept.value_or(oracle.eps_f_noise);
  }
};

/// Solution of [H J^T; J 0][d; y] = -[g; c].
struct KktSolution {
  Vector d;
  Vector y;
  double residual_inf = 0.0;
};

struct MeritParamState {
  double tau_bar = 0.1;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

KktSolution solve_kkt(const Matrix& h, const Matrix& j, const Vector& g, const Vector& c);

/// -tau g^T d + ||c||_1, valid for directions with J d = -c.
double model_reduction(double tau, const Vector& g, const Vector& d, double c_l1);

/// +infinity when g^T d + max(d^T H d, 0) <= 0, otherwise
/// (1 - sigma) ||c||_1 / (g^T d + max(d^T H d, 0)).
///
/// A denominator below 1e-12 (||g||^2 + sum |g_i d_i| + max(d^T H d, 0)) is
/// treated as zero. For a KKT direction the denominator equals c^T y exactly, so at
/// feasible points the computed value is pure cancellation error.
double tau_trial(const Vector& g, const Vector& d, const Matrix& h, double c_l1, double sigma);

MeritParamState update_tau(MeritParamState state, double trial, double eps_tau);

bool acceptance_test(double phi_bar_trial, double phi_bar_current, double alpha, double theta,
                     double delta_l, double tau_bar, double eps_f_accept);

double step_size_update(double alpha, bool accepted, double gamma, double alpha_max);

struct LeastSquaresMultipliers {
  Vector y;
  double kkt_residual_inf = 0.0;
};

/// y = argmin ||g + J^T y||_2 via Cholesky on J J^T; the residual is reported
/// in the infinity norm. Throws NotPositiveDefinite near rank deficiency.
LeastSquaresMultipliers least_squares_multipliers(const Vector& g, const Matrix& j);

struct StationarityPair {
  double kkt_l2_with_sqp_dual = 0.0;
  double sqrt_c_l2 = 0.0;

  double measure() const;
};

/// Both components of max{||grad f + J^T y||, sqrt(||c||)} with the
/// least-squares dual.
StationarityPair stationarity_pair(const Vector& g_exact, const Matrix& j, const Vector& c);

enum class RunStatus { Converged, BudgetExhausted, LinearAlgebraFailure, InvariantViolation };

std::string_view to_string(RunStatus s);
bool is_failure(RunStatus s);

struct IterationLog {
  std::size_t k = 0;
  Vector x;  // iterate at which the iteration starts
  Vector g_bar;
  Vector d;
  Vector y;
  double alpha = 0.0;
  double tau_bar = 0.0;
  double tau_trial = kInfinity;
  double delta_l = 0.0;
  double dhd = 0.0;  // d^T H d
  double c_l1 = 0.0;
  double linearized_feasibility_inf = 0.0;  // ||J d + c||_inf
  double kkt_solve_residual_inf = 0.0;
  double f_bar_current = 0.0;
  double f_bar_trial = 0.0;
  double phi_bar_current = 0.0;
  double phi_bar_trial = 0.0;
  bool accepted = false;
  double infeas_inf = 0.0;  // ||c(x)||_inf
  double kkt_inf = 0.0;     // least-squares KKT residual with the exact gradient
  std::optional<double> delta_l_true;
  std::optional<bool> true_iter;
  std::uint64_t zeroth_calls = 0;  // cumulative, after this iteration
  std::uint64_t first_calls = 0;
};

struct RunRecord {
  std::string problem;
  OracleConfig oracle;
  RunStatus status = RunStatus::BudgetExhausted;
  std::string message;
  std::vector<IterationLog> iterations;
  Vector final_x;
  double final_infeas_inf = 0.0;
  double final_kkt_inf = 0.0;
  EvalCounters counters;
  double wall_time = 0.0;  // seconds
};

struct ClassifyParams {
  double eps_f = 0.0;
  double eps_g = 0.0;
  double kappa_fo = 1.0;
};

struct IterationClass {
  bool true_iter = false;
  bool successful = false;
};

/// True iff ||g_bar - grad f|| <= max{eps_g, kappa_fo alpha sqrt(delta_l)} and
/// |f_bar - f| + |f_bar+ - f+| <= 2 eps_f; successful iff the step was accepted.
IterationClass classify_iteration(const IterationLog& log, double f_exact_current,
                                  double f_exact_trial, const Vector& grad_exact,
                                  const ClassifyParams& params);

/// Runs the adaptive step-search SQP method from p.x0.
RunRecord solve(const Problem& p, const SolverParams& params, const OracleConfig& oracle);

}  // namespace ssqp
