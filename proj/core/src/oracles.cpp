#include "ssqp/oracles.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ssqp {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// FNV-1a; only used to fold the problem name into the stream key.
std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ (v + kGolden)); }

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterRng::result_type CounterRng::operator()() {
  return mix64(key_ + kGolden * ++counter_);
}

void OracleConfig::validate() const {
  if (!(eps_f_noise >= 0.0) || !std::isfinite(eps_f_noise)) {
    throw std::invalid_argument("eps_f_noise must be finite and >= 0");
  }
  if (!(eps_g_noise >= 0.0) || !std::isfinite(eps_g_noise)) {
    throw std::invalid_argument("eps_g_noise must be finite and >= 0");
  }
}

std::uint64_t derive_stream(std::uint64_t seed, std::string_view problem_name, double eps_f,
                            double eps_g, std::uint64_t replicate) {
  // +0.0 and -0.0 must map to the same stream.
  const auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); };
  std::uint64_t h = mix64(seed);
  h = combine(h, hash_name(problem_name));
  h = combine(h, bits(eps_f));
  h = combine(h, bits(eps_g));
  h = combine(h, replicate);
  return h;
}

NoisyOracle::NoisyOracle(const Problem& problem, const OracleConfig& config)
    : problem_(&problem),
      config_(config),
      rng_(combine(mix64(config.seed), config.stream_id)) {
  config_.validate();
}

double NoisyOracle::noisy_f(const Vector& x) {
  ++counters_.zeroth_calls;
  const double f = problem_->f(x);
  if (config_.eps_f_noise == 0.0) return f;
  return f + config_.eps_f_noise * standard_normal();
}

Vector NoisyOracle::noisy_grad(const Vector& x) {
  ++counters_.first_calls;
  Vector g = problem_->grad_f(x);
  if (config_.eps_g_noise == 0.0 || g.empty()) return g;
  const double scale = config_.eps_g_noise / std::sqrt(static_cast<double>(g.size()));
  for (double& gi : g) gi += scale * standard_normal();
  return g;
}

}  // namespace ssqp
