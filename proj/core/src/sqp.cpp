#include "ssqp/sqp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ssqp {
namespace {

// Below this the merit parameter is treated as collapsed.
constexpr double kTauFloor = 1e-12;
// Absolute slack on the model-reduction guarantee.
constexpr double kModelReductionSlack = 1e-9;

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
}

std::string format_double(const char* fmt, double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

class RunAbort : public std::runtime_error {
 public:
  RunAbort(RunStatus status, const std::string& what) : std::runtime_error(what), status(status) {}
  RunStatus status;
};

void require_finite(const Vector& v, const char* what) {
  if (!all_finite(v)) throw RunAbort(RunStatus::LinearAlgebraFailure, std::string("non-finite ") + what);
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw RunAbort(RunStatus::LinearAlgebraFailure, std::string("non-finite ") + what);
}

void require_finite(const Matrix& a, const char* what) {
  for (double v : a.values()) require_finite(v, what);
}

}  // namespace

void SolverParams::validate() const {
  if (!(tau_init > 0.0) || !std::isfinite(tau_init)) {
    throw std::invalid_argument("tau_init must be positive");
  }
  require_open_unit(sigma, "sigma");
  require_open_unit(eps_tau, "eps_tau");
  require_open_unit(theta, "theta");
  require_open_unit(gamma, "gamma");
  if (!(alpha_max > 0.0 && alpha_max <= 1.0)) {
    throw std::invalid_argument("alpha_max must lie in (0,1]");
  }
  if (!(alpha0 > 0.0 && alpha0 <= alpha_max)) {
    throw std::invalid_argument("alpha0 must lie in (0, alpha_max]");
  }
  if (eps_f_accept && !(*eps_f_accept >= 0.0 && std::isfinite(*eps_f_accept))) {
    throw std::invalid_argument("eps_f_accept must be finite and >= 0");
  }
  if (!(tol_infeas > 0.0)) throw std::invalid_argument("tol_infeas must be positive");
  if (!(tol_kkt > 0.0)) throw std::invalid_argument("tol_kkt must be positive");
  if (!(kappa_fo >= 0.0)) throw std::invalid_argument("kappa_fo must be >= 0");
  if (eps_g_classify && !(*eps_g_classify >= 0.0)) {
    throw std::invalid_argument("eps_g_classify must be >= 0");
  }
}

KktSolution solve_kkt(const Matrix& h, const Matrix& j, const Vector& g, const Vector& c) {
  const std::size_t n = g.size();
  const std::size_t m = c.size();
  if (m > n) throw std::invalid_argument("solve_kkt: more constraints than variables");
  if (h.rows() != n || h.cols() != n || j.rows() != m || j.cols() != n) {
    throw DimensionMismatch("solve_kkt: block sizes do not match g and c");
  }
  if (!h.is_symmetric()) throw std::invalid_argument("solve_kkt: H is not symmetric");

  Matrix k(n + m, n + m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = 0; s < n; ++s) k(r, s) = h(r, s);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < n; ++s) {
      k(n + r, s) = j(r, s);
      k(s, n + r) = j(r, s);
    }
  const Vector rhs = -stack(g, c);
  const Vector sol = lu_solve(k, rhs);

  KktSolution out;
  out.d = Vector(std::vector<double>(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n)));
  out.y = Vector(std::vector<double>(sol.begin() + static_cast<std::ptrdiff_t>(n), sol.end()));
  out.residual_inf = norm_inf(residual(k, sol, rhs));
  return out;
}

double model_reduction(double tau, const Vector& g, const Vector& d, double c_l1) {
  return -tau * dot(g, d) + c_l1;
}

double tau_trial(const Vector& g, const Vector& d, const Matrix& h, double c_l1, double sigma) {
  const double gd = dot(g, d);
  const double curvature = std::max(quadratic_form(h, d), 0.0);
  const double denom = gd + curvature;
  // d comes out of a solve against g, so its absolute error scales with ||g||
  // and the error in g^T d with ||g||^2.
  double scale = curvature + dot(g, g);
  for (std::size_t i = 0; i < g.size(); ++i) scale += std::abs(g[i] * d[i]);
  if (denom <= 1e-12 * scale) return kInfinity;
  return (1.0 - sigma) * c_l1 / denom;
}

MeritParamState update_tau(MeritParamState state, double trial, double eps_tau) {
  if (state.tau_bar <= trial) return state;
  return {std::min((1.0 - eps_tau) * state.tau_bar, trial)};
}

bool acceptance_test(double phi_bar_trial, double phi_bar_current, double alpha, double theta,
                     double delta_l, double tau_bar, double eps_f_accept) {
  return phi_bar_trial <= phi_bar_current - alpha * theta * delta_l + 2.0 * tau_bar * eps_f_accept;
}

double step_size_update(double alpha, bool accepted, double gamma, double alpha_max) {
  return accepted ? std::min(alpha_max, alpha / gamma) : gamma * alpha;
}

LeastSquaresMultipliers least_squares_multipliers(const Vector& g, const Matrix& j) {
  LeastSquaresMultipliers out;
  if (j.rows() == 0) {
    out.kkt_residual_inf = norm_inf(g);
    return out;
  }
  out.y = cholesky_solve(gram_rows(j), -(j * g));
  out.kkt_residual_inf = norm_inf(g + multiply_transposed(j, out.y));
  return out;
}

double StationarityPair::measure() const { return std::max(kkt_l2_with_sqp_dual, sqrt_c_l2); }

StationarityPair stationarity_pair(const Vector& g_exact, const Matrix& j, const Vector& c) {
  const auto ls = least_squares_multipliers(g_exact, j);
  StationarityPair out;
  out.kkt_l2_with_sqp_dual =
      j.rows() == 0 ? norm_l2(g_exact) : norm_l2(g_exact + multiply_transposed(j, ls.y));
  out.sqrt_c_l2 = std::sqrt(norm_l2(c));
  return out;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return "Converged";
    case RunStatus::BudgetExhausted:
      return "BudgetExhausted";
    case RunStatus::LinearAlgebraFailure:
      return "LinearAlgebraFailure";
    case RunStatus::InvariantViolation:
      return "InvariantViolation";
  }
  return "Unknown";
}

bool is_failure(RunStatus s) {
  return s == RunStatus::LinearAlgebraFailure || s == RunStatus::InvariantViolation;
}

IterationClass classify_iteration(const IterationLog& log, double f_exact_current,
                                  double f_exact_trial, const Vector& grad_exact,
                                  const ClassifyParams& params) {
  const double grad_err = norm_l2(log.g_bar - grad_exact);
  const double grad_bound =
      std::max(params.eps_g, params.kappa_fo * log.alpha * std::sqrt(std::max(log.delta_l, 0.0)));
  const double e = std::abs(log.f_bar_current - f_exact_current);
  const double e_plus = std::abs(log.f_bar_trial - f_exact_trial);
  IterationClass out;
  out.true_iter = grad_err <= grad_bound && e + e_plus <= 2.0 * params.eps_f;
  out.successful = log.accepted;
  return out;
}

RunRecord solve(const Problem& p, const SolverParams& params, const OracleConfig& oracle_cfg) {
  params.validate();
  p.validate();
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.problem = p.name;
  rec.oracle = oracle_cfg;
  NoisyOracle oracle(p, oracle_cfg);
  const Matrix h = p.hessian();
  const double eps_f = params.effective_eps_f(oracle_cfg);
  const ClassifyParams classify{eps_f, params.eps_g_classify.value_or(oracle_cfg.eps_g_noise),
                                params.kappa_fo};

  Vector x = p.x0;
  MeritParamState merit{params.tau_init};
  double alpha = params.alpha0;
  rec.status = RunStatus::BudgetExhausted;

  // Exact-data measurements at x; used for termination and logging only.
  struct Measurement {
    Vector c;
    Matrix j;
    Vector g_exact;
    double infeas_inf = 0.0;
    double kkt_inf = 0.0;
  };
  const auto measure = [&](const Vector& at) {
    Measurement out;
    out.c = p.c(at);
    out.j = p.jacobian(at);
    out.g_exact = p.grad_f(at);
    require_finite(out.c, "constraint value");
    require_finite(out.j, "constraint Jacobian");
    require_finite(out.g_exact, "gradient");
    out.infeas_inf = norm_inf(out.c);
    out.kkt_inf = least_squares_multipliers(out.g_exact, out.j).kkt_residual_inf;
    return out;
  };

  try {
    for (std::size_t k = 0; k < params.max_iters; ++k) {
      const Measurement cur = measure(x);
      if (cur.infeas_inf <= params.tol_infeas && cur.kkt_inf <= params.tol_kkt) {
        rec.status = RunStatus::Converged;
        break;
      }

      IterationLog log;
      log.k = k;
      log.x = x;
      log.alpha = alpha;
      log.infeas_inf = cur.infeas_inf;
      log.kkt_inf = cur.kkt_inf;
      log.c_l1 = norm_l1(cur.c);

      log.g_bar = oracle.noisy_grad(x);
      require_finite(log.g_bar, "gradient estimate");

      KktSolution kkt = solve_kkt(h, cur.j, log.g_bar, cur.c);
      log.kkt_solve_residual_inf = kkt.residual_inf;
      log.linearized_feasibility_inf = norm_inf(cur.j * kkt.d + cur.c);
      log.dhd = quadratic_form(h, kkt.d);

      log.tau_trial = tau_trial(log.g_bar, kkt.d, h, log.c_l1, params.sigma);
      merit = update_tau(merit, log.tau_trial, params.eps_tau);
      log.tau_bar = merit.tau_bar;
      if (merit.tau_bar <= kTauFloor) {
        throw RunAbort(RunStatus::InvariantViolation,
                       "merit parameter collapsed to " + format_double("%.3e", merit.tau_bar) +
                           " at iteration " + std::to_string(k));
      }

      log.delta_l = model_reduction(merit.tau_bar, log.g_bar, kkt.d, log.c_l1);
      const double guaranteed =
          merit.tau_bar * std::max(log.dhd, 0.0) + params.sigma * log.c_l1;
      if (!(log.delta_l >= guaranteed - kModelReductionSlack)) {
        throw RunAbort(RunStatus::InvariantViolation,
                       "model reduction " + format_double("%.17g", log.delta_l) + " below " +
                           format_double("%.17g", guaranteed) + " at iteration " +
                           std::to_string(k));
      }

      const Vector x_trial = x + alpha * kkt.d;
      log.f_bar_current = oracle.noisy_f(x);
      log.f_bar_trial = oracle.noisy_f(x_trial);
      require_finite(log.f_bar_current, "objective estimate");
      require_finite(log.f_bar_trial, "objective estimate");
      const Vector c_trial = p.c(x_trial);
      require_finite(c_trial, "constraint value");
      log.phi_bar_current = merit.tau_bar * log.f_bar_current + log.c_l1;
      log.phi_bar_trial = merit.tau_bar * log.f_bar_trial + norm_l1(c_trial);

      log.accepted = acceptance_test(log.phi_bar_trial, log.phi_bar_current, alpha, params.theta,
                                     log.delta_l, merit.tau_bar, eps_f);

      if (params.diagnostics) {
        const auto cls =
            classify_iteration(log, p.f(x), p.f(x_trial), cur.g_exact, classify);
        log.true_iter = cls.true_iter;
        const KktSolution exact = solve_kkt(h, cur.j, cur.g_exact, cur.c);
        const double trial_true = tau_trial(cur.g_exact, exact.d, h, log.c_l1, params.sigma);
        const double tau_true = update_tau(merit, trial_true, params.eps_tau).tau_bar;
        log.delta_l_true = model_reduction(tau_true, cur.g_exact, exact.d, log.c_l1);
      }

      log.d = std::move(kkt.d);
      log.y = std::move(kkt.y);
      log.zeroth_calls = oracle.counters().zeroth_calls;
      log.first_calls = oracle.counters().first_calls;
      if (log.accepted) x = x_trial;
      alpha = step_size_update(alpha, log.accepted, params.gamma, params.alpha_max);
      rec.iterations.push_back(std::move(log));
    }
  } catch (const RunAbort& e) {
    rec.status = e.status;
    rec.message = e.what();
  } catch (const LinearAlgebraError& e) {
    rec.status = RunStatus::LinearAlgebraFailure;
    rec.message = e.what();
  }

  rec.final_x = x;
  rec.counters = oracle.counters();
  try {
    const Vector c = p.c(x);
    rec.final_infeas_inf = norm_inf(c);
    rec.final_kkt_inf = least_squares_multipliers(p.grad_f(x), p.jacobian(x)).kkt_residual_inf;
  } catch (const LinearAlgebraError&) {
    rec.final_kkt_inf = kInfinity;
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace ssqp
