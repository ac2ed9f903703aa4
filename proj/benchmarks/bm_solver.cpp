#include <benchmark/benchmark.h>

#include "ssqp/bench.hpp"

namespace {

using namespace ssqp;

void BM_SolveDeterministic(benchmark::State& state, const char* name) {
  const Problem p = get_problem(name);
  SolverParams params;
  params.diagnostics = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, params, OracleConfig{}));
}
BENCHMARK_CAPTURE(BM_SolveDeterministic, HS6, "HS6");
BENCHMARK_CAPTURE(BM_SolveDeterministic, HS48, "HS48");
BENCHMARK_CAPTURE(BM_SolveDeterministic, SPHERE20, "SPHERE20");
BENCHMARK_CAPTURE(BM_SolveDeterministic, QP30, "QP30");

void BM_SolveNoisy(benchmark::State& state) {
  const Problem p = get_problem("HS40");
  const OracleConfig cfg{1e-2, 1e-2, 0, derive_stream(0, "HS40", 1e-2, 1e-2, 0)};
  const bool diagnostics = state.range(0) != 0;
  SolverParams params;
  params.diagnostics = diagnostics;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, params, cfg));
}
BENCHMARK(BM_SolveNoisy)->Arg(0)->Arg(1)->ArgName("diagnostics");

void BM_RunGrid(benchmark::State& state) {
  ExperimentGrid grid;
  grid.problems = {"HS28", "HS51"};
  grid.noise_pairs = {{1e-4, 1e-2}, {1e-2, 1e-1}};
  grid.replicates = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run_grid(grid, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_RunGrid)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
