#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lattice_lab {

/// Sorted sample set supporting CDF queries and summary statistics.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::span<const double> samples() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

  /// Fraction of samples <= x.
  double cdf(double x) const;
  double quantile(double q) const;
  double median() const { return quantile(0.5); }
  double mean() const;
  double variance() const;
  double stderr_mean() const;
  double skewness() const;
  /// mean of |X|^p.
  double abs_moment(double p) const;

 private:
  void require_nonempty(const char* what) const;
  std::vector<double> sorted_;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Hill estimate of the tail exponent of |X| from the largest
/// floor(top_fraction * n) order statistics.
double hill_tail_index(const EmpiricalDistribution& d, double top_fraction);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Percentile bootstrap interval for the mean of |X|^p (p = 1 without abs
/// when `absolute` is false).
Interval bootstrap_moment_ci(std::span<const double> samples, double p, bool absolute, double level,
                             int resamples, std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

/// Pearson chi-square test of uniformity on [0, 1) with `bins` equal bins.
ChiSquareResult chi_square_uniform(std::span<const double> values, int bins);

/// chi-square survival function P(X >= x), X ~ chi^2(dof).
double chi_square_sf(double x, int dof);

}  // namespace lattice_lab
