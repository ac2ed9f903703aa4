#include <benchmark/benchmark.h>

#include <cmath>

#include "ssqp/sqp.hpp"

namespace {

using namespace ssqp;

void BM_SolveKkt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t m = n / 3 + 1;
  Matrix j(m, n);
  Vector g(n), c(m);
  for (std::size_t i = 0; i < m; ++i) {
    c[i] = std::cos(double(i));
    for (std::size_t k = 0; k < n; ++k) j(i, k) = std::sin(0.7 * double((i + 1) * (k + 1))) + (k == 2 * i);
  }
  for (std::size_t k = 0; k < n; ++k) g[k] = std::sin(double(k));
  const Matrix h = Matrix::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_kkt(h, j, g, c));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n + m));
}
BENCHMARK(BM_SolveKkt)->RangeMultiplier(2)->Range(4, 64)->Complexity(benchmark::oNCubed);

void BM_LeastSquaresMultipliers(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t m = n / 3 + 1;
  Matrix j(m, n);
  Vector g(n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) j(i, k) = std::sin(0.7 * double((i + 1) * (k + 1))) + (k == 2 * i);
  for (std::size_t k = 0; k < n; ++k) g[k] = std::cos(double(k));
  for (auto _ : state) benchmark::DoNotOptimize(least_squares_multipliers(g, j));
}
BENCHMARK(BM_LeastSquaresMultipliers)->RangeMultiplier(2)->Range(4, 64);

void BM_NoisyGradient(benchmark::State& state) {
  const Problem p = get_problem("QP30");
  NoisyOracle oracle(p, OracleConfig{1e-2, 1e-2, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(oracle.noisy_grad(p.x0));
}
BENCHMARK(BM_NoisyGradient);

}  // namespace
