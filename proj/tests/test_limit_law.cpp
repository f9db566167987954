#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "lattice_lab/errors.hpp"
#include "lattice_lab/limit_law.hpp"
#include "lattice_lab/statistics.hpp"

using namespace lattice_lab;
using std::numbers::pi;

namespace {

std::shared_ptr<const PhiGrid> bulk_grid() {
  static const auto grid = std::make_shared<const PhiGrid>(PhiEvaluator(), PhiGrid::kBulkCells);
  return grid;
}

ReducedFrame fixed_frame() { return gauss_reduce(sample_haar({41, 0})); }

LimitConfig config(double A, TailMode mode, std::uint64_t seed = 7) { return {A, mode, bulk_grid(), seed}; }

WeightDistribution constant_weight(double c) {
  return {[c](CounterRng&) { return c; }, false, std::abs(c) + 1.0};
}

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= v.size();
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace

TEST(SampleLimit, Reproducible) {
  const ReducedFrame f = fixed_frame();
  const LimitConfig cfg = config(50.0, TailMode::gaussian_surrogate);
  EXPECT_EQ(sample_limit(f, cfg, 123), sample_limit(f, cfg, 123));
  EXPECT_NE(sample_limit(f, cfg, 123), sample_limit(f, cfg, 124));
}

TEST(SampleLimit, ContractErrors) {
  const ReducedFrame f = fixed_frame();
  EXPECT_THROW(sample_limit(f, config(0.5, TailMode::truncate), 1), ContractViolation);
  EXPECT_THROW(sample_limit(f, LimitConfig{10.0, TailMode::truncate, nullptr, 1}, 1), ContractViolation);
  EXPECT_THROW(sample_limit_draws(haar_source(1), 0, config(10.0, TailMode::truncate)), ContractViolation);
}

TEST(SampleLimit, EqualsScaledWeightedSiegel) {
  const LimitConfig cfg = config(40.0, TailMode::truncate);
  const WeightDistribution w = phi_weights(bulk_grid());
  for (std::uint64_t i = 0; i < 50; ++i) {
    const ReducedFrame f = gauss_reduce(sample_haar({42, i}));
    const std::uint64_t key = draw_key(cfg.seed, i);
    EXPECT_EQ(sample_limit(f, cfg, key), 2.0 / pi * weighted_siegel(f, w, 40.0, key));
  }
}

TEST(SampleLimit, GrowingCutoffKeepsExistingTerms) {
  // With truncation, S_{2A} - S_A is exactly the annulus contribution.
  const ReducedFrame f = fixed_frame();
  const WeightDistribution w = phi_weights(bulk_grid());
  const std::vector<double> schedule{20.0, 40.0};
  for (std::uint64_t key = 0; key < 20; ++key) {
    const auto probe = convergence_probe(f, w, schedule, key);
    EXPECT_NEAR(sample_limit(f, config(20.0, TailMode::truncate), key), 2.0 / pi * probe[0].second, 1e-12);
    EXPECT_NEAR(sample_limit(f, config(40.0, TailMode::truncate), key), 2.0 / pi * probe[1].second, 1e-12);
  }
}

TEST(SampleLimit, ConditionalMeanIsZero) {
  const ReducedFrame f = fixed_frame();
  const LimitConfig cfg = config(30.0, TailMode::truncate);
  std::vector<double> s(20000);
  for (std::uint64_t i = 0; i < s.size(); ++i) s[i] = sample_limit(f, cfg, draw_key(99, i));
  const EmpiricalDistribution d(s);
  EXPECT_LE(std::abs(d.mean()), 3.0 * d.stderr_mean());
}

TEST(SampleLimit, ConditionalVarianceIncrement) {
  // Var(S_{2A} - S_A | L) = (4/pi^2) (zeta(3)/2) sum_{A < |v| <= 2A} |v|^{-3}.
  const ReducedFrame f = fixed_frame();
  const double A = 15.0;
  double annulus = 0.0;
  for (const PrimeVector& p : enumerate_prime_indices(f, 2 * A))
    if (p.norm > A) annulus += std::pow(p.norm, -3.0);
  const double expected = 4.0 / (pi * pi) * phi_variance() * annulus;
  std::vector<double> small(20000), large(20000), diff(20000);
  for (std::uint64_t i = 0; i < small.size(); ++i) {
    small[i] = sample_limit(f, config(A, TailMode::truncate), draw_key(5, i));
    large[i] = sample_limit(f, config(2 * A, TailMode::truncate), draw_key(5, i));
    diff[i] = large[i] - small[i];
  }
  EXPECT_NEAR(variance(diff), expected, 0.05 * expected);
  EXPECT_NEAR(variance(large) - variance(small), expected, 0.25 * expected);
}

TEST(TailVariance, MatchesHaarAverageOfTailSums) {
  // E over Haar L of sum over Pi with A < |v| <= B of |v|^{-3} is pi (1/A - 1/B) / zeta(2).
  const double A = 5.0, B = 100.0;
  const int n = 2000;
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (const PrimeVector& p : enumerate_prime_indices(gauss_reduce(sample_haar({43, i})), B))
      if (p.norm > A) total += std::pow(p.norm, -3.0);
  }
  const double zeta2 = pi * pi / 6.0;
  EXPECT_NEAR(total / n, pi * (1.0 / A - 1.0 / B) / zeta2, 0.03 * pi / (zeta2 * A));
  EXPECT_NEAR(tail_variance(A), 4.0 / (pi * pi) * phi_variance() * pi / (zeta2 * A), 1e-15);
  EXPECT_NEAR(phi_variance(), 0.6010284515797971, 1e-15);
}

TEST(SampleLimitDraws, IndependentOfWorkers) {
  const LimitConfig cfg = config(30.0, TailMode::gaussian_surrogate, 11);
  const auto one = sample_limit_draws(haar_source(3), 500, cfg, 1);
  const auto three = sample_limit_draws(haar_source(3), 500, cfg, 3);
  EXPECT_EQ(one, three);
  const auto f = gauss_reduce(sample_haar({3, 17}));
  EXPECT_EQ(one[17], sample_limit(f, cfg, draw_key(11, 17)));
  EXPECT_EQ(sample_limit_batch(haar_source(3), 500, cfg).size(), 500u);
}

TEST(WeightedSiegel, ZeroWeightsGiveZero) {
  EXPECT_EQ(weighted_siegel(fixed_frame(), constant_weight(0.0), 50.0, 1), 0.0);
}

TEST(WeightedSiegel, SupportBoundIsEnforced) {
  const WeightDistribution bad{[](CounterRng&) { return 2.0; }, true, 1.0};
  EXPECT_THROW(weighted_siegel(fixed_frame(), bad, 10.0, 1), ContractViolation);
  const WeightDistribution nan{[](CounterRng&) { return NAN; }, true, 1.0};
  EXPECT_THROW(weighted_siegel(fixed_frame(), nan, 10.0, 1), ContractViolation);
  EXPECT_THROW(weighted_siegel(fixed_frame(), WeightDistribution{}, 10.0, 1), ContractViolation);
}

TEST(WeightedSiegel, RademacherWeights) {
  CounterRng rng(1);
  const WeightDistribution w = rademacher_weights();
  int plus = 0;
  for (int i = 0; i < 10000; ++i) {
    const double z = w.sampler(rng);
    ASSERT_TRUE(z == 1.0 || z == -1.0);
    plus += z > 0;
  }
  EXPECT_NEAR(plus, 5000, 200);
  EXPECT_TRUE(w.is_symmetric);
}

TEST(ConvergenceProbe, Examples) {
  const ReducedFrame f = fixed_frame();
  const std::vector<double> below{0.5 * f.n1};
  const auto p = convergence_probe(f, rademacher_weights(), below, 1);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].first, below[0]);
  EXPECT_EQ(p[0].second, 0.0);
  EXPECT_TRUE(convergence_probe(f, rademacher_weights(), std::vector<double>{}, 1).empty());
  EXPECT_THROW(convergence_probe(f, rademacher_weights(), std::vector<double>{2.0, 1.0}, 1), ContractViolation);
  EXPECT_THROW(convergence_probe(f, rademacher_weights(), std::vector<double>{2.0, 2.0}, 1), ContractViolation);
}

TEST(ConvergenceProbe, SquareLatticeUnitWeights) {
  const ReducedFrame sq = gauss_reduce(Basis2());
  const std::vector<double> schedule{1.0, 2.5, 7.0, 20.0};
  const auto p = convergence_probe(sq, constant_weight(1.0), schedule, 0);
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    double direct = 0.0;
    const auto lim = static_cast<std::int64_t>(schedule[j]);
    for (std::int64_t a = 0; a <= lim; ++a)
      for (std::int64_t b = -lim; b <= lim; ++b) {
        if (a == 0 && b <= 0) continue;
        if (std::gcd(a, b) != 1) continue;
        const double r = std::hypot(double(a), double(b));
        if (r <= schedule[j]) direct += std::pow(r, -1.5);
      }
    EXPECT_NEAR(p[j].second, direct, 1e-12) << schedule[j];
  }
}

TEST(ConvergenceProbe, MatchesWeightedSiegelAtEachCutoff) {
  const WeightDistribution w = phi_weights(bulk_grid());
  const std::vector<double> schedule{3.0, 10.0, 30.0};
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ReducedFrame f = gauss_reduce(sample_haar({44, i}));
    const auto p = convergence_probe(f, w, schedule, i);
    for (const auto& [A, partial] : p) EXPECT_NEAR(partial, weighted_siegel(f, w, A, i), 1e-12);
  }
}

TEST(ConvergenceProbe, IncrementsShrink) {
  const WeightDistribution w = phi_weights(bulk_grid());
  const std::vector<double> schedule{50.0, 100.0, 200.0, 400.0};
  std::vector<std::vector<double>> inc(3);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto p = convergence_probe(gauss_reduce(sample_haar({45, i})), w, schedule, draw_key(45, i));
    for (int j = 0; j < 3; ++j) inc[j].push_back(std::abs(p[j + 1].second - p[j].second));
  }
  const double m0 = EmpiricalDistribution(inc[0]).median();
  const double m1 = EmpiricalDistribution(inc[1]).median();
  const double m2 = EmpiricalDistribution(inc[2]).median();
  EXPECT_GT(m0, m1);
  EXPECT_GT(m1, m2);
}

TEST(WeightedSiegel, RademacherConditionalMoments) {
  // Var = sum over Pi_A of |v|^{-3}, exactly, for +-1 weights.
  const ReducedFrame f = fixed_frame();
  const double A = 12.0;
  double expected = 0.0;
  for (const PrimeVector& p : enumerate_prime_indices(f, A)) expected += std::pow(p.norm, -3.0);
  std::vector<double> s(40000);
  for (std::uint64_t i = 0; i < s.size(); ++i) s[i] = weighted_siegel(f, rademacher_weights(), A, draw_key(6, i));
  const EmpiricalDistribution d(s);
  EXPECT_LE(std::abs(d.mean()), 3.0 * d.stderr_mean());
  EXPECT_NEAR(variance(s), expected, 0.03 * expected);
}

TEST(SampleLimit, ConditionalMeanOnTwentyLattices) {
  const LimitConfig cfg = config(10.0, TailMode::truncate);
  for (std::uint64_t j = 0; j < 20; ++j) {
    const ReducedFrame f = gauss_reduce(sample_haar({46, j}));
    std::vector<double> s(100000);
    for (std::uint64_t i = 0; i < s.size(); ++i) s[i] = sample_limit(f, cfg, draw_key(46 + j, i));
    const EmpiricalDistribution d(std::move(s));
    EXPECT_LE(std::abs(d.mean()), 3.0 * d.stderr_mean()) << "lattice " << j;
  }
}

TEST(SampleLimit, ShortVectorDominatesOnSmallFirstMinimum) {
  // Given |L|_1 < 0.2, S |L|_1^{3/2} is close to (2/pi) phi(theta_(1,0)).
  const LimitConfig cfg = config(100.0, TailMode::truncate);
  std::vector<double> x, y;
  for (std::uint64_t i = 0; x.size() < 1000; ++i) {
    const ReducedFrame f = gauss_reduce(sample_haar({47, i}));
    if (f.n1 >= 0.2) continue;
    const std::uint64_t key = draw_key(47, i);
    x.push_back(sample_limit(f, cfg, key) * std::pow(f.n1, 1.5));
    CounterRng rng = index_stream(key, {1, 0});
    y.push_back(2.0 / pi * (*bulk_grid())(rng.uniform()));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  EXPECT_GT(sxy / std::sqrt(sxx * syy), 0.9);
}
