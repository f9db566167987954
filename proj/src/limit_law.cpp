#include "lattice_lab/limit_law.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>

#include "lattice_lab/parallel.hpp"
#include "lattice_lab/statistics.hpp"

namespace lattice_lab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kDrawTag = 0x44726177ULL;  // "Draw"
constexpr std::uint64_t kTailTag = 0x5461696cULL;  // "Tail"

double checked_weight(const WeightDistribution& weights, CounterRng& rng) {
  const double z = weights.sampler(rng);
  if (!(std::abs(z) <= weights.support_bound)) {
    throw ContractViolation("weighted_siegel: weight sample exceeds support_bound");
  }
  return z;
}

}  // namespace

LatticeSource haar_source(std::uint64_t seed) {
  return [seed](std::uint64_t i) { return sample_haar({seed, i}); };
}

double phi_variance() { return 0.5 * boost::math::zeta(3.0); }

double tail_variance(double A) {
  const double zeta2 = kPi * kPi / 6.0;
  return 4.0 / (kPi * kPi) * phi_variance() * kPi / (zeta2 * A);
}

std::uint64_t draw_key(std::uint64_t seed, std::uint64_t index) { return derive_key({kDrawTag, seed, index}); }

CounterRng index_stream(std::uint64_t key, PrimeIndex k) {
  const std::uint64_t h = mix64(static_cast<std::uint64_t>(k.k1) * 0x9e3779b97f4a7c15ULL ^
                                static_cast<std::uint64_t>(k.k2) * 0xc2b2ae3d27d4eb4fULL);
  return CounterRng(key ^ h);
}

double sample_limit(const ReducedFrame& frame, const LimitConfig& cfg, std::uint64_t key) {
  if (!(cfg.cutoff_A >= 1.0)) throw ContractViolation("sample_limit: cutoff_A must be >= 1");
  if (!cfg.phi) throw ContractViolation("sample_limit: missing phi grid");
  const PhiGrid& grid = *cfg.phi;
  double sum = 0.0;
  for_each_prime_index(frame, cfg.cutoff_A, [&](PrimeIndex k, Vec2, double r) {
    CounterRng rng = index_stream(key, k);
    sum += grid(rng.uniform()) * inv_pow_three_halves(r);
  });
  double s = 2.0 / kPi * sum;
  if (cfg.tail_mode == TailMode::gaussian_surrogate) {
    CounterRng rng(derive_key({kTailTag, key}));
    s += std::sqrt(tail_variance(cfg.cutoff_A)) * rng.normal();
  }
  return s;
}

std::vector<double> sample_limit_draws(const LatticeSource& source, std::uint64_t n, const LimitConfig& cfg,
                                       unsigned workers) {
  if (n < 1) throw ContractViolation("sample_limit_batch: n must be >= 1");
  std::vector<double> out(n);
  parallel_for(n, workers, [&](std::uint64_t i) {
    out[i] = sample_limit(gauss_reduce(source(i)), cfg, draw_key(cfg.seed, i));
  });
  return out;
}

EmpiricalDistribution sample_limit_batch(const LatticeSource& source, std::uint64_t n, const LimitConfig& cfg,
                                         unsigned workers) {
  return EmpiricalDistribution(sample_limit_draws(source, n, cfg, workers));
}

double weighted_siegel(const ReducedFrame& frame, const WeightDistribution& weights, double A, std::uint64_t key) {
  if (!weights.sampler) throw ContractViolation("weighted_siegel: empty sampler");
  double sum = 0.0;
  for_each_prime_index(frame, A, [&](PrimeIndex k, Vec2, double r) {
    CounterRng rng = index_stream(key, k);
    sum += checked_weight(weights, rng) * inv_pow_three_halves(r);
  });
  return sum;
}

std::vector<std::pair<double, double>> convergence_probe(const ReducedFrame& frame,
                                                          const WeightDistribution& weights,
                                                          std::span<const double> schedule, std::uint64_t key) {
  if (!weights.sampler) throw ContractViolation("convergence_probe: empty sampler");
  if (!std::is_sorted(schedule.begin(), schedule.end()) ||
      std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end()) {
    throw ContractViolation("convergence_probe: schedule must be strictly increasing");
  }
  std::vector<std::pair<double, double>> out;
  for (double A : schedule) out.emplace_back(A, 0.0);
  if (schedule.empty()) return out;
  for_each_prime_index(frame, schedule.back(), [&](PrimeIndex k, Vec2 v, double r) {
    CounterRng rng = index_stream(key, k);
    const double term = checked_weight(weights, rng) * inv_pow_three_halves(r);
    const double q = norm2(v);
    for (auto& [A, partial] : out)
      if (q <= A * A) partial += term;
  });
  return out;
}

WeightDistribution phi_weights(std::shared_ptr<const PhiGrid> grid) {
  return {[grid](CounterRng& rng) { return (*grid)(rng.uniform()); }, true, boost::math::zeta(1.5)};
}

WeightDistribution rademacher_weights() {
  return {[](CounterRng& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; }, true, 1.0};
}

}  // namespace lattice_lab
