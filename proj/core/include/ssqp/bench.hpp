#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssqp/problem.hpp"
#include "ssqp/sqp.hpp"

namespace ssqp {

struct NoisePair {
  double eps_f = 0.0;
  double eps_g = 0.0;

  bool deterministic() const { return eps_f == 0.0 && eps_g == 0.0; }
  bool operator==(const NoisePair&) const = default;
};

/// {0, 1e-4, 1e-2, 1e-1} x {1e-4, 1e-2, 1e-1} plus (0, 0).
std::vector<NoisePair> default_noise_pairs();

struct ExperimentGrid {
  std::vector<std::string> problems;  // empty means every built-in problem
  std::vector<NoisePair> noise_pairs = default_noise_pairs();
  std::size_t replicates = 5;
  SolverParams params;
  std::uint64_t seed = 0;
  double eps_pp = 1e-3;
  /// Work weights for zeroth- and first-order oracle calls.
  double weight_zeroth = 1.0;
  double weight_first = 1.0;

  void validate() const;
};

struct GridCell {
  std::string problem;
  NoisePair noise;
  std::size_t replicate = 0;
  std::uint64_t stream_id = 0;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::vector<RunRecord> runs;  // runs[i] belongs to cells[i]
};

/// Cells in deterministic order: problem, then noise pair, then replicate.
/// Deterministic pairs get a single replicate.
std::vector<GridCell> enumerate_cells(const ExperimentGrid& grid);

/// Runs every cell; `jobs` worker threads share the cell list. Results do not
/// depend on `jobs`. `extra_problems` are resolved before the built-in suite.
GridResult run_grid(const ExperimentGrid& grid, unsigned jobs = 1,
                    std::span<const Problem> extra_problems = {});

enum class Metric { Infeasibility, Kkt };
enum class WorkAxis { Iterations, Evaluations };

std::string_view to_string(Metric m);
std::string_view to_string(WorkAxis a);

struct TrajectoryPoint {
  double work = 0.0;
  double metric = 0.0;
};

/// Metric values m(x_k) against cumulative work; work is non-decreasing.
using ProfileInput = std::vector<TrajectoryPoint>;

/// Per-iteration metric samples of one run as stored in a run CSV.
struct RunTrace {
  std::vector<double> infeas_inf;
  std::vector<double> kkt_inf;
  std::vector<std::uint64_t> zeroth_calls;  // cumulative after each iteration
  std::vector<std::uint64_t> first_calls;
  double final_infeas_inf = 0.0;
  double final_kkt_inf = 0.0;
  std::uint64_t final_zeroth_calls = 0;
  std::uint64_t final_first_calls = 0;
};

RunTrace trace_of(const RunRecord& run);

/// Infeasibility is ||c||_inf; KKT is max(||c||_inf, least-squares residual).
ProfileInput profile_input(const RunTrace& trace, Metric metric, WorkAxis axis,
                           double weight_zeroth = 1.0, double weight_first = 1.0);

/// Smallest work at which m0 - m >= (1 - eps_pp)(m0 - m_best), or nullopt.
std::optional<double> convergence_budget(std::span<const TrajectoryPoint> trajectory,
                                         double m0, double m_best, double eps_pp = 1e-3);

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProfilePoint {
  double tau = 1.0;
  double rho = 0.0;
};

struct PerformanceProfile {
  std::vector<std::string> solvers;
  std::size_t instances = 0;
  /// ratios[s][i]: budget over the best budget on instance i; +inf when unsolved.
  std::vector<std::vector<double>> ratios;
  /// Step points of rho_s: one point per distinct finite ratio, ascending.
  std::vector<std::vector<ProfilePoint>> curves;

  /// Fraction of instances with ratio <= tau.
  double rho(std::size_t solver, double tau) const;
};

/// budgets[s][i] is the work solver s needed on instance i, nullopt if it never
/// converged. A zero budget is counted as one unit so that ratios stay finite.
PerformanceProfile build_profile(std::vector<std::string> solvers,
                                 const std::vector<std::vector<std::optional<double>>>& budgets);

/// One profile panel per (eps_g level, metric, work axis). Solvers are the
/// eps_f levels run at that eps_g; instances are (problem, replicate) pairs.
struct NamedProfile {
  std::string name;
  double eps_g = 0.0;
  Metric metric = Metric::Kkt;
  WorkAxis axis = WorkAxis::Iterations;
  PerformanceProfile profile;
};

struct LabelledTrace {
  GridCell cell;
  RunTrace trace;
};

std::vector<NamedProfile> grid_profiles(std::span<const LabelledTrace> runs, double eps_pp,
                                        double weight_zeroth = 1.0, double weight_first = 1.0);

// Output files.

/// "<problem>__f<eps_f>__g<eps_g>__r<replicate>.csv"
std::string run_file_name(const GridCell& cell);

void write_run_csv(const std::filesystem::path& path, const RunRecord& run);
RunTrace read_run_csv(const std::filesystem::path& path);

/// Statuses and final metrics for every run; no timings, so that reruns
/// produce identical bytes.
void write_summary_json(const std::filesystem::path& path, const ExperimentGrid& grid,
                        const GridResult& result);
/// Wall-clock timings per run.
void write_timings_json(const std::filesystem::path& path, const GridResult& result);

struct GridOutputs {
  double eps_pp = 1e-3;
  double weight_zeroth = 1.0;
  double weight_first = 1.0;
  std::vector<LabelledTrace> runs;
};

/// Reads summary.json plus the run CSVs it lists from `dir`.
GridOutputs read_grid_outputs(const std::filesystem::path& dir);

void write_profile_csv(const std::filesystem::path& path, const PerformanceProfile& profile);

}  // namespace ssqp
