#pragma once

// Experiment drivers. Each driver draws Haar lattices from
// haar_source(seed), evaluates per-draw quantities in parallel into indexed
// slots, then reduces sequentially so a report is a pure function of its
// parameters.

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lattice_lab/disk_counting.hpp"
#include "lattice_lab/lattice_core.hpp"
#include "lattice_lab/limit_law.hpp"
#include "lattice_lab/spectral_sums.hpp"
#include "lattice_lab/statistics.hpp"

namespace lattice_lab {

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, double>> stats;
  std::vector<std::pair<std::string, bool>> pass;
  double runtime_seconds = 0.0;

  void set_stat(const std::string& name, double value);
  void set_pass(const std::string& name, bool ok);
  /// Throws ContractViolation for an unknown name.
  double stat(const std::string& name) const;
  bool passed(const std::string& name) const;
  bool all_pass() const;
};

/// Prime lattice vectors (both signs) with r_inner < |v| <= r_outer, averaged
/// over n Haar lattices, against the mean value pi (r_outer^2 - r_inner^2) / zeta(2).
ExperimentReport siegel_mean_check(std::uint64_t n, double r_inner, double r_outer, std::uint64_t seed,
                                   unsigned workers = 1);

/// Counting errors at dilation t for Haar lattices 0..n-1 of `seed`.
std::vector<ErrorSample> error_samples(std::uint64_t n, double t, std::uint64_t seed, unsigned workers = 1);

/// Law of R(t D^2, L) / sqrt(t) over n Haar lattices; t >= 10, n >= 1000.
EmpiricalDistribution error_law_experiment(std::uint64_t n, double t, std::uint64_t seed, unsigned workers = 1);

/// Delta = |R(t D^2, L)/sqrt(t) - S_{A,prime}(dual L, t)| for Haar lattices 0..n-1.
std::vector<double> delta_values(std::uint64_t n, double t, double A, std::uint64_t seed, const PhiEvaluator& ev,
                                 unsigned workers = 1);

/// Frequency of Delta >= alpha (passes when it is at most alpha) and the
/// median of Delta.
ExperimentReport delta_experiment(std::uint64_t n, double t, double A, double alpha, std::uint64_t seed,
                                  unsigned workers = 1);

/// delta_experiment at each cutoff on the same lattices, plus the criterion
/// that the median of Delta decreases along `cutoffs`.
ExperimentReport delta_trend(std::uint64_t n, double t, std::span<const double> cutoffs, double alpha,
                             std::uint64_t seed, unsigned workers = 1);

/// Copies stats and criteria of `from` into `into`, names prefixed.
void merge_report(ExperimentReport& into, const ExperimentReport& from, const std::string& prefix);

/// Uniformity and decoupling statistics of phase columns thetas[j] (one per
/// k_list[j]) against psi. Thresholds: chi^2 p > 1e-3, moduli <= 0.02.
ExperimentReport equidistribution_statistics(std::span<const std::vector<double>> thetas,
                                             std::span<const double> psi, std::span<const PrimeIndex> k_list);

/// Phases theta_k(L, t) for Haar L, with psi = 1(|L|_1 > 0.8).
ExperimentReport equidistribution_experiment(std::uint64_t n, double t, std::span<const PrimeIndex> k_list,
                                             std::uint64_t seed, unsigned workers = 1);

/// Seed of the limit-law sample paired with error-law samples under `seed`.
std::uint64_t limit_seed(std::uint64_t seed);

/// KS distance between the error law at each t and n_limit limit draws at
/// cutoff A with the Gaussian tail. Passes when the last distance is <= 0.05
/// and distances decrease along t_list.
ExperimentReport compare_laws(std::uint64_t n_error, std::uint64_t n_limit, std::span<const double> t_list,
                              double A, std::uint64_t seed, std::shared_ptr<const PhiGrid> grid,
                              unsigned workers = 1);

/// KS distance between limit draws at A (Gaussian tail) and at 4A
/// (truncated) sharing theta keys; passes at <= 0.01.
ExperimentReport truncation_check(std::uint64_t n, double A, std::uint64_t seed,
                                  std::shared_ptr<const PhiGrid> grid, unsigned workers = 1);

/// Tail and moment structure of S from n limit draws: Hill index (top 0.5%),
/// E|S|^1.2 and E|S|^1.5 on the prefixes n/100, n/10, n (those >= 1000), the
/// zero-mean check, and the advisory symmetry distance KS(S, -S).
ExperimentReport tail_experiment(std::span<const double> draws);
ExperimentReport tail_experiment(std::uint64_t n, double A, std::uint64_t seed, std::shared_ptr<const PhiGrid> grid,
                                 unsigned workers = 1);

/// P(|L|_1 < eps) / eps^2 for each eps over n Haar lattices; passes when the
/// ratios lie in [0.85, 1.05] and within 15% of each other.
ExperimentReport small_norm_experiment(std::uint64_t n, std::span<const double> eps_list, std::uint64_t seed,
                                       unsigned workers = 1);

/// Reduction and shape identities on n Haar lattices.
ExperimentReport identity_experiment(std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

}  // namespace lattice_lab
