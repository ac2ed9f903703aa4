#include "ssqp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <tuple>

namespace ssqp {

std::vector<NoisePair> default_noise_pairs() {
  std::vector<NoisePair> pairs{{0.0, 0.0}};
  for (double f : {0.0, 1e-4, 1e-2, 1e-1})
    for (double g : {1e-4, 1e-2, 1e-1}) pairs.push_back({f, g});
  return pairs;
}

void ExperimentGrid::validate() const {
  params.validate();
  if (noise_pairs.empty()) throw std::invalid_argument("grid.noise_pairs must not be empty");
  for (const auto& np : noise_pairs) {
    if (!(np.eps_f >= 0.0) || !(np.eps_g >= 0.0) || !std::isfinite(np.eps_f) ||
        !std::isfinite(np.eps_g)) {
      throw std::invalid_argument("grid.noise_pairs entries must be finite and >= 0");
    }
  }
  if (replicates == 0) throw std::invalid_argument("grid.replicates must be >= 1");
  if (!(eps_pp > 0.0 && eps_pp < 1.0)) throw std::invalid_argument("grid.eps_pp must lie in (0,1)");
  if (!(weight_zeroth >= 0.0) || !(weight_first >= 0.0)) {
    throw std::invalid_argument("grid work weights must be >= 0");
  }
}

std::vector<GridCell> enumerate_cells(const ExperimentGrid& grid) {
  const std::vector<std::string> problems = grid.problems.empty() ? problem_names() : grid.problems;
  std::vector<GridCell> cells;
  for (const auto& name : problems) {
    for (const auto& np : grid.noise_pairs) {
      const std::size_t reps = np.deterministic() ? 1 : grid.replicates;
      for (std::size_t r = 0; r < reps; ++r) {
        cells.push_back({name, np, r, derive_stream(grid.seed, name, np.eps_f, np.eps_g, r)});
      }
    }
  }
  return cells;
}

GridResult run_grid(const ExperimentGrid& grid, unsigned jobs,
                    std::span<const Problem> extra_problems) {
  grid.validate();
  GridResult result;
  result.cells = enumerate_cells(grid);
  result.runs.resize(result.cells.size());

  std::map<std::string, Problem> problems;
  for (const auto& cell : result.cells) {
    if (problems.count(cell.problem)) continue;
    const auto it = std::find_if(extra_problems.begin(), extra_problems.end(),
                                 [&](const Problem& p) { return p.name == cell.problem; });
    problems.emplace(cell.problem, it != extra_problems.end() ? *it : get_problem(cell.problem));
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      const GridCell& cell = result.cells[i];
      const OracleConfig cfg{cell.noise.eps_f, cell.noise.eps_g, grid.seed, cell.stream_id};
      try {
        result.runs[i] = solve(problems.at(cell.problem), grid.params, cfg);
      } catch (const std::exception& e) {
        RunRecord failed;
        failed.problem = cell.problem;
        failed.oracle = cfg;
        failed.status = RunStatus::LinearAlgebraFailure;
        failed.message = e.what();
        result.runs[i] = std::move(failed);
      }
    }
  };

  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(result.cells.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }
  return result;
}

std::string_view to_string(Metric m) { return m == Metric::Infeasibility ? "infeas" : "kkt"; }

std::string_view to_string(WorkAxis a) {
  return a == WorkAxis::Iterations ? "iterations" : "work";
}

RunTrace trace_of(const RunRecord& run) {
  RunTrace t;
  for (const auto& it : run.iterations) {
    t.infeas_inf.push_back(it.infeas_inf);
    t.kkt_inf.push_back(it.kkt_inf);
    t.zeroth_calls.push_back(it.zeroth_calls);
    t.first_calls.push_back(it.first_calls);
  }
  t.final_infeas_inf = run.final_infeas_inf;
  t.final_kkt_inf = run.final_kkt_inf;
  t.final_zeroth_calls = run.counters.zeroth_calls;
  t.final_first_calls = run.counters.first_calls;
  return t;
}

ProfileInput profile_input(const RunTrace& trace, Metric metric, WorkAxis axis,
                           double weight_zeroth, double weight_first) {
  const auto value = [&](double infeas, double kkt) {
    return metric == Metric::Infeasibility ? infeas : std::max(infeas, kkt);
  };
  const auto work = [&](std::size_t k, std::uint64_t z, std::uint64_t f) {
    return axis == WorkAxis::Iterations
               ? static_cast<double>(k)
               : weight_zeroth * static_cast<double>(z) + weight_first * static_cast<double>(f);
  };
  ProfileInput out;
  const std::size_t n = trace.infeas_inf.size();
  out.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t z = k == 0 ? 0 : trace.zeroth_calls[k - 1];
    const std::uint64_t f = k == 0 ? 0 : trace.first_calls[k - 1];
    out.push_back({work(k, z, f), value(trace.infeas_inf[k], trace.kkt_inf[k])});
  }
  out.push_back({work(n, trace.final_zeroth_calls, trace.final_first_calls),
                 value(trace.final_infeas_inf, trace.final_kkt_inf)});
  return out;
}

std::optional<double> convergence_budget(std::span<const TrajectoryPoint> trajectory, double m0,
                                         double m_best, double eps_pp) {
  const double target = (1.0 - eps_pp) * (m0 - m_best);
  for (const auto& pt : trajectory) {
    if (m0 - pt.metric >= target) return pt.work;
  }
  return std::nullopt;
}

double PerformanceProfile::rho(std::size_t solver, double tau) const {
  if (instances == 0) return 0.0;
  const auto& r = ratios.at(solver);
  const auto hits = std::count_if(r.begin(), r.end(), [tau](double v) { return v <= tau; });
  return static_cast<double>(hits) / static_cast<double>(instances);
}

PerformanceProfile build_profile(std::vector<std::string> solvers,
                                 const std::vector<std::vector<std::optional<double>>>& budgets) {
  if (solvers.empty() || budgets.size() != solvers.size()) {
    throw EmptyInput("build_profile: need one budget row per solver and at least one solver");
  }
  const std::size_t n_inst = budgets.front().size();
  if (n_inst == 0) throw EmptyInput("build_profile: no instances");
  for (const auto& row : budgets) {
    if (row.size() != n_inst) throw std::invalid_argument("build_profile: ragged budget table");
  }

  PerformanceProfile prof;
  prof.solvers = std::move(solvers);
  prof.instances = n_inst;
  prof.ratios.assign(budgets.size(), std::vector<double>(n_inst, kInfinity));
  std::set<double> taus{1.0};
  for (std::size_t i = 0; i < n_inst; ++i) {
    std::optional<double> best;
    for (const auto& row : budgets) {
      if (row[i] && (!best || *row[i] < *best)) best = row[i];
    }
    if (!best) continue;
    for (std::size_t s = 0; s < budgets.size(); ++s) {
      if (!budgets[s][i]) continue;
      const double ratio = std::max(*budgets[s][i], 1.0) / std::max(*best, 1.0);
      prof.ratios[s][i] = ratio;
      taus.insert(ratio);
    }
  }
  prof.curves.resize(budgets.size());
  for (std::size_t s = 0; s < budgets.size(); ++s) {
    for (double tau : taus) prof.curves[s].push_back({tau, prof.rho(s, tau)});
  }
  return prof;
}

std::vector<NamedProfile> grid_profiles(std::span<const LabelledTrace> runs, double eps_pp,
                                        double weight_zeroth, double weight_first) {
  std::set<double> g_levels;
  for (const auto& r : runs) g_levels.insert(r.cell.noise.eps_g);

  std::vector<NamedProfile> out;
  for (double eps_g : g_levels) {
    std::vector<const LabelledTrace*> panel;
    std::set<double> f_levels;
    std::set<std::pair<std::string, std::size_t>> instance_set;
    for (const auto& r : runs) {
      if (r.cell.noise.eps_g != eps_g) continue;
      panel.push_back(&r);
      f_levels.insert(r.cell.noise.eps_f);
      instance_set.emplace(r.cell.problem, r.cell.replicate);
    }
    const std::vector<double> fs(f_levels.begin(), f_levels.end());
    const std::vector<std::pair<std::string, std::size_t>> instances(instance_set.begin(),
                                                                     instance_set.end());
    std::vector<std::string> solver_names;
    for (double f : fs) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "f%g", f);
      solver_names.emplace_back(buf);
    }

    for (Metric metric : {Metric::Infeasibility, Metric::Kkt}) {
      for (WorkAxis axis : {WorkAxis::Iterations, WorkAxis::Evaluations}) {
        // trajectories[s][i]
        std::vector<std::vector<std::optional<ProfileInput>>> traj(
            fs.size(), std::vector<std::optional<ProfileInput>>(instances.size()));
        for (const LabelledTrace* r : panel) {
          const auto s = static_cast<std::size_t>(
              std::find(fs.begin(), fs.end(), r->cell.noise.eps_f) - fs.begin());
          const auto i = static_cast<std::size_t>(
              std::find(instances.begin(), instances.end(),
                        std::make_pair(r->cell.problem, r->cell.replicate)) -
              instances.begin());
          traj[s][i] = profile_input(r->trace, metric, axis, weight_zeroth, weight_first);
        }
        std::vector<std::vector<std::optional<double>>> budgets(
            fs.size(), std::vector<std::optional<double>>(instances.size()));
        for (std::size_t i = 0; i < instances.size(); ++i) {
          double m_best = kInfinity;
          for (std::size_t s = 0; s < fs.size(); ++s) {
            if (!traj[s][i]) continue;
            for (const auto& pt : *traj[s][i]) m_best = std::min(m_best, pt.metric);
          }
          for (std::size_t s = 0; s < fs.size(); ++s) {
            if (!traj[s][i] || traj[s][i]->empty()) continue;
            const double m0 = traj[s][i]->front().metric;
            budgets[s][i] = convergence_budget(*traj[s][i], m0, m_best, eps_pp);
          }
        }
        char name[96];
        std::snprintf(name, sizeof(name), "g%g__%s__%s", eps_g, to_string(metric).data(),
                      to_string(axis).data());
        out.push_back({name, eps_g, metric, axis, build_profile(solver_names, budgets)});
      }
    }
  }
  return out;
}

}  // namespace ssqp
