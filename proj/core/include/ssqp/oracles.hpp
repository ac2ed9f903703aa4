#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include "ssqp/linalg.hpp"
#include "ssqp/problem.hpp"

namespace ssqp {

/// Noise model for the stochastic objective oracles:
///   f_bar ~ N(f(x), eps_f_noise^2),  g_bar ~ N(grad f(x), (eps_g_noise^2 / n) I).
struct OracleConfig {
  double eps_f_noise = 0.0;
  double eps_g_noise = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  void validate() const;
};

struct EvalCounters {
  std::uint64_t zeroth_calls = 0;
  std::uint64_t first_calls = 0;

  std::uint64_t total() const { return zeroth_calls + first_calls; }
};

/// Counter-based 64-bit generator: the i-th output is a bijective mix of
/// (key, i). Distinct keys give independent streams without coordination.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Stream id for one (seed, problem, noise pair, replicate) cell.
std::uint64_t derive_stream(std::uint64_t seed, std::string_view problem_name, double eps_f,
                            double eps_g, std::uint64_t replicate);

/// Zeroth- and first-order stochastic oracles over one problem. Each call
/// draws fresh noise; call order defines the noise sequence. Not thread-safe:
/// one instance per run.
class NoisyOracle {
 public:
  NoisyOracle(const Problem& problem, const OracleConfig& config);

  double noisy_f(const Vector& x);
  Vector noisy_grad(const Vector& x);

  const EvalCounters& counters() const { return counters_; }
  const OracleConfig& config() const { return config_; }

 private:
  double standard_normal() { return normal_(rng_); }

  const Problem* problem_;
  OracleConfig config_;
  CounterRng rng_;
  std::normal_distribution<double> normal_;
  EvalCounters counters_;
};

}  // namespace ssqp
