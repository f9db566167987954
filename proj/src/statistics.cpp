#include "lattice_lab/statistics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "lattice_lab/errors.hpp"
#include "lattice_lab/rng.hpp"

namespace lattice_lab {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples)) {
  for (double x : sorted_)
    if (std::isnan(x)) throw ContractViolation("EmpiricalDistribution: NaN sample");
  std::sort(sorted_.begin(), sorted_.end());
}

void EmpiricalDistribution::require_nonempty(const char* what) const {
  if (sorted_.empty()) throw ContractViolation(std::string(what) + ": empty distribution");
}

double EmpiricalDistribution::cdf(double x) const {
  require_nonempty("cdf");
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double q) const {
  require_nonempty("quantile");
  if (!(q >= 0.0 && q <= 1.0)) throw ContractViolation("quantile: q outside [0, 1]");
  // Linear interpolation between order statistics (type 7).
  const double h = q * static_cast<double>(sorted_.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= sorted_.size()) return sorted_.back();
  return sorted_[i] + (h - static_cast<double>(i)) * (sorted_[i + 1] - sorted_[i]);
}

double EmpiricalDistribution::mean() const {
  require_nonempty("mean");
  double s = 0.0;
  for (double x : sorted_) s += x;
  return s / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::variance() const {
  require_nonempty("variance");
  if (sorted_.size() < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (double x : sorted_) s += (x - m) * (x - m);
  return s / static_cast<double>(sorted_.size() - 1);
}

double EmpiricalDistribution::stderr_mean() const {
  return std::sqrt(variance() / static_cast<double>(sorted_.size()));
}

double EmpiricalDistribution::skewness() const {
  require_nonempty("skewness");
  const double m = mean();
  double m2 = 0.0, m3 = 0.0;
  for (double x : sorted_) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const auto n = static_cast<double>(sorted_.size());
  m2 /= n;
  m3 /= n;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

double EmpiricalDistribution::abs_moment(double p) const {
  require_nonempty("abs_moment");
  double s = 0.0;
  for (double x : sorted_) s += std::pow(std::abs(x), p);
  return s / static_cast<double>(sorted_.size());
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.empty() || b.empty()) throw ContractViolation("ks_distance: empty distribution");
  const auto sa = a.samples(), sb = b.samples();
  const auto na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double hill_tail_index(const EmpiricalDistribution& d, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction <= 0.1)) {
    throw ContractViolation("hill_tail_index: top_fraction must lie in (0, 0.1]");
  }
  std::vector<double> mags;
  mags.reserve(d.size());
  for (double x : d.samples()) mags.push_back(std::abs(x));
  const auto k = static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(mags.size())));
  if (k < 100 || k >= mags.size()) {
    throw ContractViolation("hill_tail_index: fewer than 100 samples in the tail");
  }
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(), std::greater<>());
  const double threshold = mags[k];  // (k+1)-th largest
  if (!(threshold > 0.0)) throw ContractViolation("hill_tail_index: non-positive values in the tail");
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) h += std::log(mags[i] / threshold);
  h /= static_cast<double>(k);
  if (!(h > 0.0)) throw ContractViolation("hill_tail_index: zero log-spacings in the tail");
  return 1.0 / h;
}

Interval bootstrap_moment_ci(std::span<const double> samples, double p, bool absolute, double level,
                             int resamples, std::uint64_t seed) {
  if (samples.empty()) throw ContractViolation("bootstrap_moment_ci: empty sample");
  if (resamples < 10) throw ContractViolation("bootstrap_moment_ci: need at least 10 resamples");
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = absolute ? std::pow(std::abs(samples[i]), p) : samples[i];
  }
  const auto n = values.size();
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    CounterRng rng(derive_key({0x426f6f74ULL, seed, static_cast<std::uint64_t>(r)}));
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += values[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))];
    }
    stats[static_cast<std::size_t>(r)] = s / static_cast<double>(n);
  }
  const EmpiricalDistribution boot(std::move(stats));
  const double alpha = 0.5 * (1.0 - level);
  return {boot.quantile(alpha), boot.quantile(1.0 - alpha)};
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw ContractViolation("chi_square_sf: dof must be >= 1");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_uniform(std::span<const double> values, int bins) {
  if (bins < 2) throw ContractViolation("chi_square_uniform: need at least 2 bins");
  if (values.empty()) throw ContractViolation("chi_square_uniform: empty sample");
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    if (!(v >= 0.0 && v < 1.0)) throw ContractViolation("chi_square_uniform: value outside [0, 1)");
    auto b = static_cast<std::size_t>(v * bins);
    counts[std::min(b, counts.size() - 1)] += 1.0;
  }
  const double expected = static_cast<double>(values.size()) / bins;
  ChiSquareResult r;
  for (double c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.dof = bins - 1;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

}  // namespace lattice_lab
