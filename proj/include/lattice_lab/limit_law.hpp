#pragma once

// Sampling of the limit law
//
//   S(theta, L) = (2/pi) sum_{k in Pi} phi(theta_k) / |k1 e1 + k2 e2|^{3/2},
//
// theta_k iid uniform, and of the general random-weight transforms
// sum_{k in Pi_A} Z_k / |v_k|^{3/2}.
//
// Randomness is keyed per prime index: the weight attached to k is a pure
// function of (draw key, k1, k2). Growing the cutoff therefore only adds
// terms and never resamples existing ones.

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lattice_lab/haar_sampling.hpp"
#include "lattice_lab/rng.hpp"
#include "lattice_lab/spectral_sums.hpp"

namespace lattice_lab {

enum class TailMode { truncate, gaussian_surrogate };

struct LimitConfig {
  double cutoff_A = 100.0;
  TailMode tail_mode = TailMode::gaussian_surrogate;
  std::shared_ptr<const PhiGrid> phi;
  std::uint64_t seed = 0;
};

struct WeightDistribution {
  std::function<double(CounterRng&)> sampler;
  bool is_symmetric = true;
  double support_bound = 1.0;
};

/// Source of lattices for batch sampling: draw index -> basis.
using LatticeSource = std::function<Basis2(std::uint64_t)>;

/// Haar lattices with SamplerConfig{seed, index}.
LatticeSource haar_source(std::uint64_t seed);

/// Var phi(U) = zeta(3)/2.
double phi_variance();

/// Variance of the Gaussian replacing the terms with |v| > A:
/// (4/pi^2) (zeta(3)/2) * E sum_{k in Pi, |v_k| > A} |v_k|^{-3} = (4/pi^2)(zeta(3)/2) pi / (zeta(2) A).
double tail_variance(double A);

/// Stream key of draw `index` under `seed`.
std::uint64_t draw_key(std::uint64_t seed, std::uint64_t index);

/// Counter stream for the weight of prime index k within a draw.
CounterRng index_stream(std::uint64_t key, PrimeIndex k);

/// One draw of S(theta, L) given L; theta is keyed by `key`.
double sample_limit(const ReducedFrame& frame, const LimitConfig& cfg, std::uint64_t key);

/// n iid draws of (L, theta) in draw-index order; draw i uses lattice source(i)
/// and key draw_key(cfg.seed, i). Result is independent of `workers`.
std::vector<double> sample_limit_draws(const LatticeSource& source, std::uint64_t n, const LimitConfig& cfg,
                                       unsigned workers = 1);

class EmpiricalDistribution;
EmpiricalDistribution sample_limit_batch(const LatticeSource& source, std::uint64_t n, const LimitConfig& cfg,
                                         unsigned workers = 1);

/// sum_{k in Pi_A} Z_k / |v_k|^{3/2}, Z_k drawn from index_stream(key, k).
double weighted_siegel(const ReducedFrame& frame, const WeightDistribution& weights, double A, std::uint64_t key);

/// Partial sums along an increasing schedule of cutoffs with the same Z_k.
std::vector<std::pair<double, double>> convergence_probe(const ReducedFrame& frame,
                                                          const WeightDistribution& weights,
                                                          std::span<const double> schedule, std::uint64_t key);

/// Z = phi(U) through a grid; the weight whose (2/pi)-scaled transform is S.
WeightDistribution phi_weights(std::shared_ptr<const PhiGrid> grid);
WeightDistribution rademacher_weights();

}  // namespace lattice_lab
