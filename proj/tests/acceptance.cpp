// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "eigen_oracle.hpp"
#include "ssqp/bench.hpp"
#include "ssqp/cli.hpp"
#include "ssqp/oracles.hpp"
#include "ssqp/problem.hpp"
#include "ssqp/sqp.hpp"

namespace fs = std::filesystem;
using namespace ssqp;
using ssqp::testing::from_eigen;
using ssqp::testing::to_eigen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. Deterministic convergence over the whole suite.
Outcome deterministic_convergence() {
  SolverParams params;
  params.eps_f_accept = 0.0;
  const auto start = std::chrono::steady_clock::now();
  std::string bad;
  std::size_t worst_iters = 0;
  for (const auto& e : problem_suite()) {
    const RunRecord r = solve(e.problem, params, OracleConfig{});
    worst_iters = std::max(worst_iters, r.iterations.size());
    const bool ok = r.status == RunStatus::Converged && r.iterations.size() <= 1000 &&
                    r.final_infeas_inf <= 1e-6 && r.final_kkt_inf <= 1e-4;
    if (!ok) {
      bad += fmt(" %s(%s, %zu it, infeas %.2e, kkt %.2e)", e.problem.name.c_str(),
                 std::string(to_string(r.status)).c_str(), r.iterations.size(),
                 r.final_infeas_inf, r.final_kkt_inf);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = bad.empty() && secs < 10.0;
  return {pass, fmt("%zu problems, max %zu iterations, %.2f s", problem_suite().size(),
                    worst_iters, secs) +
                    (bad.empty() ? "" : "; failed:" + bad)};
}

// 2. First full step on P2 hits the closed-form minimizer.
Outcome one_step_qp() {
  const Problem p = get_problem("P2");
  const RunRecord r = solve(p, SolverParams{}, OracleConfig{});
  if (r.iterations.empty()) return {false, "no iterations"};
  const IterationLog& it = r.iterations.front();
  const Vector x1 = it.x + it.alpha * it.d;
  const Eigen::MatrixXd a = to_eigen(p.jacobian(p.x0));
  const Eigen::VectorXd b = -to_eigen(p.c(Vector(p.n, 0.0)));
  const Eigen::VectorXd x_ref = a.transpose() * (a * a.transpose()).ldlt().solve(b);
  const Vector x_star = from_eigen(x_ref);
  const double err = norm_inf(x1 - x_star);
  return {it.alpha == 1.0 && it.accepted && err <= 1e-8,
          fmt("alpha %.1f, |x1 - x*|_inf = %.2e", it.alpha, err)};
}

// 3. Per-iteration invariants across the full noise grid.
Outcome invariant_suite() {
  ExperimentGrid grid;  // all problems, default noise pairs, 5 replicates
  const GridResult res = run_grid(grid, worker_count());
  const SolverParams& prm = grid.params;
  std::size_t iters = 0;
  std::size_t violations[6] = {0, 0, 0, 0, 0, 0};
  std::string first;
  const auto flag = [&](int which, const GridCell& cell, std::size_t k) {
    if (violations[which]++ == 0 && first.size() < 300) {
      first += fmt(" [%c] %s f%g g%g r%zu k=%zu;", "abcdeX"[which], cell.problem.c_str(),
                   cell.noise.eps_f, cell.noise.eps_g, cell.replicate, k);
    }
  };
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    const RunRecord& run = res.runs[i];
    const GridCell& cell = res.cells[i];
    if (is_failure(run.status)) flag(5, cell, run.iterations.size());
    double prev_tau = prm.tau_init;
    std::uint64_t prev_z = 0, prev_f = 0;
    Vector expected_x = get_problem(cell.problem).x0;
    for (const auto& it : run.iterations) {
      ++iters;
      if (!(it.delta_l >= it.tau_bar * std::max(it.dhd, 0.0) + prm.sigma * it.c_l1 - 1e-9))
        flag(0, cell, it.k);
      const bool kept = it.tau_bar == prev_tau;
      const bool dropped = it.tau_bar <= (1.0 - prm.eps_tau) * prev_tau;
      if (!(kept || dropped)) flag(1, cell, it.k);
      if (!(it.linearized_feasibility_inf <= 1e-9 * (1.0 + it.infeas_inf))) flag(2, cell, it.k);
      if (it.first_calls - prev_f != 1 || it.zeroth_calls - prev_z != 2) flag(3, cell, it.k);
      if (!(it.x == expected_x)) flag(4, cell, it.k);
      expected_x = it.accepted ? it.x + it.alpha * it.d : it.x;
      prev_tau = it.tau_bar;
      prev_f = it.first_calls;
      prev_z = it.zeroth_calls;
    }
    if (!(run.final_x == expected_x)) flag(4, cell, run.iterations.size());
  }
  std::size_t total = 0;
  for (auto v : violations) total += v;
  return {total == 0,
          fmt("%zu runs, %zu iterations; violations a=%zu b=%zu c=%zu d=%zu e=%zu, failed runs=%zu",
              res.runs.size(), iters, violations[0], violations[1], violations[2], violations[3],
              violations[4], violations[5]) +
              first};
}

// 4. Noise floor on P2.
Outcome noise_floor() {
  const Problem p = get_problem("P2");
  const double eps_f = 1e-2, eps_g = 1e-1;
  int good = 0;
  std::string best_list;
  for (std::uint64_t r = 0; r < 5; ++r) {
    const OracleConfig cfg{eps_f, eps_g, 0, derive_stream(0, "P2", eps_f, eps_g, r)};
    const RunRecord run = solve(p, SolverParams{}, cfg);
    double best = run.final_kkt_inf;
    for (const auto& it : run.iterations) best = std::min(best, it.kkt_inf);
    if (best <= 10.0 * eps_g) ++good;
    best_list += fmt(" %.2e", best);
  }
  return {good >= 4, fmt("%d/5 replicates with best KKT <= %.1f; best:", good, 10.0 * eps_g) +
                         best_list};
}

// 5. Iterations to reach stationarity eps grow monotonically and by at most
// 100x per decade.
Outcome complexity_trend() {
  const char* name = "HS27";
  const Problem p = get_problem(name);
  SolverParams params;
  params.tol_infeas = 1e-12;
  params.tol_kkt = 1e-10;
  const RunRecord run = solve(p, params, OracleConfig{});
  std::vector<Vector> xs;
  for (const auto& it : run.iterations) xs.push_back(it.x);
  xs.push_back(run.final_x);
  const auto measure = [&](const Vector& x) {
    return stationarity_pair(p.grad_f(x), p.jacobian(x), p.c(x)).measure();
  };
  const double eps[3] = {1e-1, 1e-2, 1e-3};
  long hit[3] = {-1, -1, -1};
  for (int e = 0; e < 3; ++e) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (measure(xs[k]) <= eps[e]) {
        hit[e] = static_cast<long>(k);
        break;
      }
    }
  }
  bool pass = hit[0] >= 0 && hit[1] >= 0 && hit[2] >= 0;
  for (int e = 1; pass && e < 3; ++e) {
    pass = hit[e] >= hit[e - 1] && hit[e] <= 100 * std::max(hit[e - 1], 1L);
  }
  return {pass, fmt("%s: iterations to eps 1e-1/1e-2/1e-3 = %ld/%ld/%ld", name, hit[0], hit[1],
                    hit[2])};
}

// 6. solve_kkt against an explicit inverse on random small systems.
Outcome kkt_equivalence() {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick_n(1, 7);
  int systems = 0;
  double worst_err = 0.0, worst_res = 0.0, worst_cond = 0.0;
  bool pass = true;
  while (systems < 100) {
    const int n = pick_n(rng);
    const int m = std::uniform_int_distribution<int>(1, std::min(n, 8 - n))(rng);
    // Orthogonal factors with log-uniform spectra so that conditioning spans
    // several decades.
    const auto orthogonal = [&](int k) {
      const Eigen::MatrixXd r = Eigen::MatrixXd::NullaryExpr(k, k, [&] { return normal(rng); });
      return Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ());
    };
    std::uniform_real_distribution<double> decades(-5.0, 0.0);
    Eigen::VectorXd lambda(n), sv(m);
    for (int i = 0; i < n; ++i) lambda(i) = std::pow(10.0, decades(rng));
    for (int i = 0; i < m; ++i) sv(i) = std::pow(10.0, 0.75 * decades(rng));
    const Eigen::MatrixXd qh = orthogonal(n);
    const Eigen::MatrixXd h = qh * lambda.asDiagonal() * qh.transpose();
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(m, n);
    for (int i = 0; i < m; ++i) sigma(i, i) = sv(i);
    const Eigen::MatrixXd j = orthogonal(m) * sigma * orthogonal(n).transpose();
    const Eigen::VectorXd g = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
    const Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(m, [&] { return normal(rng); });

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n) = h;
    kkt.topRightCorner(n, m) = j.transpose();
    kkt.bottomLeftCorner(m, n) = j;
    const double cond = ssqp::testing::cond2(kkt);
    if (!(cond <= 1e6)) continue;
    ++systems;
    worst_cond = std::max(worst_cond, cond);

    Eigen::VectorXd rhs(n + m);
    rhs << -g, -c;
    const Eigen::VectorXd ref = kkt.inverse() * rhs;
    const KktSolution s =
        solve_kkt(from_eigen(Eigen::MatrixXd(h)), from_eigen(Eigen::MatrixXd(j)),
                  from_eigen(Eigen::VectorXd(g)), from_eigen(Eigen::VectorXd(c)));
    Eigen::VectorXd z(n + m);
    z << to_eigen(s.d), to_eigen(s.y);
    const double err = (z - ref).cwiseAbs().maxCoeff();
    const double rhs_inf = rhs.cwiseAbs().maxCoeff();
    const double res_bound = 1e-10 * (1.0 + rhs_inf);
    const double independent_res = (kkt * z - rhs).cwiseAbs().maxCoeff();
    worst_err = std::max(worst_err, err);
    worst_res = std::max(worst_res, std::max(s.residual_inf, independent_res) / (1.0 + rhs_inf));
    if (!(err <= 1e-8) || !(s.residual_inf <= res_bound) || !(independent_res <= res_bound)) {
      pass = false;
    }
  }
  return {pass, fmt("100 systems (max cond %.1e): max |z - z_inv|_inf = %.2e, max residual/(1+|rhs|) = %.2e",
                    worst_cond, worst_err, worst_res)};
}

// 7. Oracle noise statistics.
Outcome oracle_statistics() {
  constexpr int kN = 100000;
  const double eps_f = 1e-2, eps_g = 1e-1;
  const Problem p = get_problem("SPHERE20");
  NoisyOracle o(p, OracleConfig{eps_f, eps_g, 77, derive_stream(77, p.name, eps_f, eps_g, 0)});
  const double f = p.f(p.x0);
  const Vector g = p.grad_f(p.x0);
  double sum_f = 0.0, sum_g2 = 0.0;
  for (int i = 0; i < kN; ++i) {
    sum_f += o.noisy_f(p.x0) - f;
    const Vector e = o.noisy_grad(p.x0) - g;
    sum_g2 += dot(e, e);
  }
  const double mean_f = sum_f / kN;
  const double band = 3.0 * eps_f / std::sqrt(static_cast<double>(kN));
  const double energy = sum_g2 / kN;
  const double rel = std::abs(energy - eps_g * eps_g) / (eps_g * eps_g);
  return {std::abs(mean_f) <= band && rel <= 0.05,
          fmt("mean(f_bar - f) = %.2e (band %.2e); E|g_bar - g|^2 = %.5e vs %.5e (rel %.3f)",
              mean_f, band, energy, eps_g * eps_g, rel)};
}

// 8. Profile fixture and convergence-test examples.
Outcome profile_fixture() {
  const PerformanceProfile prof = build_profile({"A", "B"}, {{10.0}, {20.0}});
  const bool rho_ok = prof.rho(0, 1.0) == 1.0 && prof.rho(1, 1.0) == 0.0 && prof.rho(1, 2.0) == 1.0;

  const std::vector<TrajectoryPoint> reach{{0, 1.0}, {1, 0.4}, {2, 0.1}};
  const auto b1 = convergence_budget(reach, 1.0, 0.1, 1e-3);  // reaches m_best itself
  const std::vector<TrajectoryPoint> flat{{0, 2.0}, {1, 2.0}};
  const auto b2 = convergence_budget(flat, 2.0, 2.0, 1e-3);  // m0 = m_best
  const std::vector<TrajectoryPoint> tagged{{0, 1.0}, {1, 0.5}, {2, 1e-4}};
  const auto b3 = convergence_budget(tagged, 1.0, 0.0, 1e-3);
  const bool budget_ok = b1 == 2.0 && b2 == 0.0 && b3 == 2.0;
  return {rho_ok && budget_ok,
          fmt("rho_A(1)=%g rho_B(1)=%g rho_B(2)=%g; budgets %g %g %g", prof.rho(0, 1.0),
              prof.rho(1, 1.0), prof.rho(1, 2.0), b1.value_or(-1), b2.value_or(-1),
              b3.value_or(-1))};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. Bench output is independent of --jobs.
Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "ssqp_acceptance_repro";
  fs::remove_all(root);
  int rc[2];
  const unsigned jobs[2] = {1, 4};
  for (int i = 0; i < 2; ++i) {
    CliConfig cfg;
    cfg.subcommand = Subcommand::Bench;
    cfg.output_dir = root / ("jobs" + std::to_string(jobs[i]));
    cfg.jobs = jobs[i];
    cfg.seed = 2024;
    std::ostringstream out, err;
    rc[i] = dispatch(cfg, out, err);
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(root / "jobs1")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    const fs::path other = root / "jobs4" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) ++differing;
  }
  std::size_t files4 = 0;
  for (const auto& entry : fs::directory_iterator(root / "jobs4"))
    if (entry.path().extension() == ".csv") ++files4;
  const bool summaries_equal =
      slurp(root / "jobs1" / "summary.json") == slurp(root / "jobs4" / "summary.json");
  fs::remove_all(root);
  return {rc[0] == 0 && rc[1] == 0 && files > 0 && files == files4 && differing == 0 &&
              summaries_equal,
          fmt("%zu run CSVs compared, %zu differ; summary.json %s; exit codes %d/%d", files,
              differing, summaries_equal ? "identical" : "differs", rc[0], rc[1])};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"deterministic convergence", deterministic_convergence},
      {"one-step QP optimality", one_step_qp},
      {"invariant suite over noise grid", invariant_suite},
      {"noise-floor behavior", noise_floor},
      {"complexity trend", complexity_trend},
      {"KKT solver oracle equivalence", kkt_equivalence},
      {"oracle statistics", oracle_statistics},
      {"profile fixture", profile_fixture},
      {"reproducibility across --jobs", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
