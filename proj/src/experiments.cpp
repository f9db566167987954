#include "lattice_lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "lattice_lab/errors.hpp"
#include "lattice_lab/haar_sampling.hpp"
#include "lattice_lab/parallel.hpp"

namespace lattice_lab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;

std::string index_name(PrimeIndex k) { return "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + ")"; }

std::string real_name(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void require_n(std::uint64_t n, std::uint64_t min, const char* who) {
  if (n < min) throw ContractViolation(std::string(who) + ": n must be >= " + std::to_string(min));
}

}  // namespace

void ExperimentReport::set_stat(const std::string& name, double value) {
  for (auto& [k, v] : stats)
    if (k == name) {
      v = value;
      return;
    }
  stats.emplace_back(name, value);
}

void ExperimentReport::set_pass(const std::string& name, bool ok) {
  for (auto& [k, v] : pass)
    if (k == name) {
      v = ok;
      return;
    }
  pass.emplace_back(name, ok);
}

double ExperimentReport::stat(const std::string& name) const {
  for (const auto& [k, v] : stats)
    if (k == name) return v;
  throw ContractViolation("report " + experiment + ": no statistic '" + name + "'");
}

bool ExperimentReport::passed(const std::string& name) const {
  for (const auto& [k, v] : pass)
    if (k == name) return v;
  throw ContractViolation("report " + experiment + ": no criterion '" + name + "'");
}

bool ExperimentReport::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](const auto& p) { return p.second; });
}

ExperimentReport siegel_mean_check(std::uint64_t n, double r_inner, double r_outer, std::uint64_t seed,
                                   unsigned workers) {
  require_n(n, 1000, "siegel_mean_check");
  if (!(r_inner >= 0.0 && r_inner <= r_outer)) {
    throw ContractViolation("siegel_mean_check: need 0 <= radius_inner <= radius_outer");
  }
  const LatticeSource source = haar_source(seed);
  std::vector<double> counts(n);
  parallel_for(n, workers, [&](std::uint64_t i) {
    const ReducedFrame frame = gauss_reduce(source(i));
    std::int64_t c = 0;
    for_each_prime_index(frame, r_outer, [&](PrimeIndex, Vec2, double r) {
      if (r > r_inner) c += 2;
    });
    counts[i] = static_cast<double>(c);
  });
  double s = 0.0, s2 = 0.0;
  for (double c : counts) {
    s += c;
    s2 += c * c;
  }
  const auto nn = static_cast<double>(n);
  const double mean = s / nn, second = s2 / nn;
  const double expected = kPi * (r_outer * r_outer - r_inner * r_inner) / kZeta2;

  ExperimentReport rep;
  rep.experiment = "siegel-check";
  rep.params = {{"seed", seed}, {"n", n}, {"r_inner", r_inner}, {"r_outer", r_outer}, {"tolerance", 0.015}};
  rep.set_stat("mean", mean);
  rep.set_stat("expected", expected);
  rep.set_stat("relative_error", expected > 0.0 ? std::abs(mean - expected) / expected : std::abs(mean));
  rep.set_stat("stderr", std::sqrt(std::max(0.0, second - mean * mean) / nn));
  rep.set_stat("second_moment", second);
  rep.set_stat("second_moment_over_expected_sq", expected > 0.0 ? second / (expected * expected) : 0.0);
  rep.set_pass("mean_within_tolerance", std::abs(mean - expected) <= 0.015 * expected);
  return rep;
}

std::vector<ErrorSample> error_samples(std::uint64_t n, double t, std::uint64_t seed, unsigned workers) {
  if (!(t > 0.0)) throw ContractViolation("error_samples: t must be > 0");
  const LatticeSource source = haar_source(seed);
  std::vector<ErrorSample> out(n);
  parallel_for(n, workers, [&](std::uint64_t i) { out[i] = error_sample(source(i), t); });
  return out;
}

EmpiricalDistribution error_law_experiment(std::uint64_t n, double t, std::uint64_t seed, unsigned workers) {
  require_n(n, 1000, "error_law_experiment");
  if (!(t >= 10.0)) throw ContractViolation("error_law_experiment: t must be >= 10");
  std::vector<double> values;
  values.reserve(n);
  for (const ErrorSample& e : error_samples(n, t, seed, workers)) values.push_back(e.normalized);
  return EmpiricalDistribution(std::move(values));
}

std::vector<double> delta_values(std::uint64_t n, double t, double A, std::uint64_t seed, const PhiEvaluator& ev,
                                 unsigned workers) {
  const LatticeSource source = haar_source(seed);
  std::vector<double> out(n);
  parallel_for(n, workers, [&](std::uint64_t i) {
    const Basis2 L = source(i);
    const double r = error_sample(L, t).normalized;
    out[i] = std::abs(r - s_a_prime(gauss_reduce(dual(L)), t, A, ev));
  });
  return out;
}

ExperimentReport delta_experiment(std::uint64_t n, double t, double A, double alpha, std::uint64_t seed,
                                  unsigned workers) {
  require_n(n, 1000, "delta_experiment");
  const PhiEvaluator ev;
  const std::vector<double> d = delta_values(n, t, A, seed, ev, workers);
  const auto hits = std::count_if(d.begin(), d.end(), [&](double x) { return x >= alpha; });
  const double freq = static_cast<double>(hits) / static_cast<double>(n);
  const EmpiricalDistribution dist(d);

  ExperimentReport rep;
  rep.experiment = "delta";
  rep.params = {{"seed", seed}, {"n", n}, {"t", t}, {"cutoff", A}, {"alpha", alpha}};
  rep.set_stat("frequency", freq);
  rep.set_stat("median_delta", dist.median());
  rep.set_stat("mean_delta", dist.mean());
  rep.set_pass("frequency_at_most_alpha", freq <= alpha);
  return rep;
}

ExperimentReport delta_trend(std::uint64_t n, double t, std::span<const double> cutoffs, double alpha,
                             std::uint64_t seed, unsigned workers) {
  require_n(n, 1000, "delta_trend");
  if (cutoffs.empty()) throw ContractViolation("delta_trend: empty cutoff list");
  const PhiEvaluator ev;
  ExperimentReport rep;
  rep.experiment = "delta";
  rep.params = {{"seed", seed},
                {"n", n},
                {"t", t},
                {"cutoff", std::vector<double>(cutoffs.begin(), cutoffs.end())},
                {"alpha", alpha}};
  std::vector<double> medians;
  for (double A : cutoffs) {
    const std::vector<double> d = delta_values(n, t, A, seed, ev, workers);
    const auto hits = std::count_if(d.begin(), d.end(), [&](double x) { return x >= alpha; });
    const double freq = static_cast<double>(hits) / static_cast<double>(n);
    const EmpiricalDistribution dist(d);
    medians.push_back(dist.median());
    const std::string tag = "_A" + real_name(A);
    rep.set_stat("frequency" + tag, freq);
    rep.set_stat("median_delta" + tag, medians.back());
    rep.set_stat("mean_delta" + tag, dist.mean());
    rep.set_pass("frequency_at_most_alpha" + tag, freq <= alpha);
  }
  if (medians.size() > 1) {
    bool decreasing = true;
    for (std::size_t i = 1; i < medians.size(); ++i) decreasing = decreasing && medians[i] < medians[i - 1];
    rep.set_pass("median_decreasing", decreasing);
  }
  return rep;
}

void merge_report(ExperimentReport& into, const ExperimentReport& from, const std::string& prefix) {
  for (const auto& [k, v] : from.stats) into.set_stat(prefix + k, v);
  for (const auto& [k, v] : from.pass) into.set_pass(prefix + k, v);
}

ExperimentReport equidistribution_statistics(std::span<const std::vector<double>> thetas,
                                             std::span<const double> psi, std::span<const PrimeIndex> k_list) {
  if (thetas.size() != k_list.size()) throw ContractViolation("equidistribution: one theta column per k");
  const std::size_t n = psi.size();
  for (const auto& col : thetas)
    if (col.size() != n) throw ContractViolation("equidistribution: column length mismatch");
  if (n == 0) throw ContractViolation("equidistribution: empty sample");
  const auto nn = static_cast<double>(n);
  constexpr double kMaxModulus = 0.02;
  constexpr double kMinP = 1e-3;

  // e(theta) per sample and column.
  std::vector<std::vector<std::complex<double>>> e(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    e[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) e[j][i] = std::polar(1.0, 2.0 * kPi * thetas[j][i]);
  }
  double psi_mean = 0.0;
  for (double p : psi) psi_mean += p;
  psi_mean /= nn;

  ExperimentReport rep;
  rep.experiment = "equidist";
  rep.set_stat("psi_mean", psi_mean);
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const std::string name = index_name(k_list[j]);
    const ChiSquareResult chi = chi_square_uniform(thetas[j], 20);
    std::complex<double> m{}, mp{};
    for (std::size_t i = 0; i < n; ++i) {
      m += e[j][i];
      mp += psi[i] * e[j][i];
    }
    m /= nn;
    mp /= nn;
    const double coupling = std::abs(mp - psi_mean * m);
    rep.set_stat("chi2_" + name, chi.statistic);
    rep.set_stat("chi2_p_" + name, chi.p_value);
    rep.set_stat("modulus_" + name, std::abs(m));
    rep.set_stat("psi_coupling_" + name, coupling);
    rep.set_pass("chi2_" + name, chi.p_value > kMinP);
    rep.set_pass("modulus_" + name, std::abs(m) <= kMaxModulus);
    rep.set_pass("psi_coupling_" + name, coupling <= kMaxModulus);
  }
  for (std::size_t a = 0; a < thetas.size(); ++a) {
    for (std::size_t b = a + 1; b < thetas.size(); ++b) {
      std::complex<double> m{};
      for (std::size_t i = 0; i < n; ++i) m += e[a][i] * std::conj(e[b][i]);
      const double mod = std::abs(m / nn);
      const std::string name = "pair_" + index_name(k_list[a]) + "_" + index_name(k_list[b]);
      rep.set_stat(name, mod);
      rep.set_pass(name, mod <= kMaxModulus);
    }
  }
  return rep;
}

ExperimentReport equidistribution_experiment(std::uint64_t n, double t, std::span<const PrimeIndex> k_list,
                                             std::uint64_t seed, unsigned workers) {
  require_n(n, 1000, "equidistribution_experiment");
  if (!(t >= 100.0)) throw ContractViolation("equidistribution_experiment: t must be >= 100");
  const LatticeSource source = haar_source(seed);
  std::vector<std::vector<double>> thetas(k_list.size(), std::vector<double>(n));
  std::vector<double> psi(n);
  parallel_for(n, workers, [&](std::uint64_t i) {
    const ReducedFrame frame = gauss_reduce(source(i));
    for (std::size_t j = 0; j < k_list.size(); ++j) thetas[j][i] = theta_k(frame, k_list[j], t);
    psi[i] = frame.n1 > 0.8 ? 1.0 : 0.0;
  });
  ExperimentReport rep = equidistribution_statistics(thetas, psi, k_list);
  nlohmann::ordered_json ks = nlohmann::ordered_json::array();
  for (PrimeIndex k : k_list) ks.push_back({k.k1, k.k2});
  rep.params = {{"seed", seed}, {"n", n}, {"t", t}, {"k", ks}};
  return rep;
}

std::uint64_t limit_seed(std::uint64_t seed) { return derive_key({0x4c696d6974ULL, seed}); }

ExperimentReport compare_laws(std::uint64_t n_error, std::uint64_t n_limit, std::span<const double> t_list,
                              double A, std::uint64_t seed, std::shared_ptr<const PhiGrid> grid,
                              unsigned workers) {
  if (t_list.empty()) throw ContractViolation("compare_laws: empty t list");
  const LimitConfig cfg{A, TailMode::gaussian_surrogate, std::move(grid), limit_seed(seed)};
  const EmpiricalDistribution limit = sample_limit_batch(haar_source(cfg.seed), n_limit, cfg, workers);

  ExperimentReport rep;
  rep.experiment = "compare-laws";
  rep.params = {{"seed", seed},
                {"n", n_error},
                {"n_limit", n_limit},
                {"t", std::vector<double>(t_list.begin(), t_list.end())},
                {"cutoff", A},
                {"tail_mode", "gaussian_surrogate"}};
  rep.set_stat("limit_mean", limit.mean());
  rep.set_stat("limit_median", limit.median());
  std::vector<double> ks;
  for (double t : t_list) {
    const EmpiricalDistribution err = error_law_experiment(n_error, t, seed, workers);
    ks.push_back(ks_distance(err, limit));
    rep.set_stat("ks_t" + real_name(t), ks.back());
    rep.set_stat("error_mean_t" + real_name(t), err.mean());
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < ks.size(); ++i) decreasing = decreasing && ks[i] < ks[i - 1];
  rep.set_pass("ks_final_at_most_0.05", ks.back() <= 0.05);
  rep.set_pass("ks_decreasing", decreasing);
  return rep;
}

ExperimentReport truncation_check(std::uint64_t n, double A, std::uint64_t seed,
                                  std::shared_ptr<const PhiGrid> grid, unsigned workers) {
  const LimitConfig with_tail{A, TailMode::gaussian_surrogate, grid, seed};
  const LimitConfig truncated{4.0 * A, TailMode::truncate, grid, seed};
  const LatticeSource source = haar_source(seed);
  const EmpiricalDistribution a = sample_limit_batch(source, n, with_tail, workers);
  const EmpiricalDistribution b = sample_limit_batch(source, n, truncated, workers);
  const double ks = ks_distance(a, b);

  ExperimentReport rep;
  rep.experiment = "truncation";
  rep.params = {{"seed", seed}, {"n", n}, {"cutoff", A}, {"reference_cutoff", 4.0 * A}};
  rep.set_stat("ks", ks);
  rep.set_stat("tail_sd", std::sqrt(tail_variance(A)));
  rep.set_pass("ks_at_most_0.01", ks <= 0.01);
  return rep;
}

ExperimentReport tail_experiment(std::span<const double> draws) {
  require_n(draws.size(), 1000, "tail_experiment");
  const EmpiricalDistribution all{std::vector<double>(draws.begin(), draws.end())};

  ExperimentReport rep;
  rep.experiment = "tail";
  const double hill = hill_tail_index(all, 0.005);
  rep.set_stat("hill_index", hill);
  rep.set_pass("hill_index_in_[1.18,1.48]", hill >= 1.18 && hill <= 1.48);

  // P(|S| > beta) ~ C beta^{-4/3} at the top-0.5% threshold.
  std::vector<double> mags;
  mags.reserve(draws.size());
  for (double x : draws) mags.push_back(std::abs(x));
  const double beta = EmpiricalDistribution(mags).quantile(0.995);
  rep.set_stat("tail_threshold", beta);
  rep.set_stat("tail_constant_estimate", 0.005 * std::pow(beta, 4.0 / 3.0));

  std::vector<std::size_t> sizes;
  for (std::size_t m : {draws.size() / 100, draws.size() / 10, draws.size()})
    if (m >= 1000) sizes.push_back(m);
  std::vector<double> m12, m15;
  for (std::size_t m : sizes) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = std::abs(draws[i]);
      a += std::pow(x, 1.2);
      b += std::pow(x, 1.5);
    }
    m12.push_back(a / static_cast<double>(m));
    m15.push_back(b / static_cast<double>(m));
    rep.set_stat("moment_1.2_n" + std::to_string(m), m12.back());
    rep.set_stat("moment_1.5_n" + std::to_string(m), m15.back());
  }
  bool stable = true, increasing = true;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    const double ratio = std::max(m12[i], m12[i - 1]) / std::min(m12[i], m12[i - 1]);
    rep.set_stat("moment_1.2_ratio_" + std::to_string(i), ratio);
    stable = stable && ratio <= 1.1;
    increasing = increasing && m15[i] > m15[i - 1];
  }
  rep.set_pass("moment_1.2_stable", stable);
  rep.set_pass("moment_1.5_increasing", increasing);

  const double mean = all.mean(), se = all.stderr_mean();
  rep.set_stat("mean", mean);
  rep.set_stat("stderr", se);
  rep.set_stat("skewness", all.skewness());
  rep.set_pass("zero_mean", std::abs(mean) <= 3.0 * se);

  std::vector<double> neg;
  neg.reserve(draws.size());
  for (double x : draws) neg.push_back(-x);
  const double sym = ks_distance(all, EmpiricalDistribution(std::move(neg)));
  // Advisory only: symmetry of the law of phi(U) is not established.
  rep.set_stat("symmetry_ks", sym);
  rep.set_stat("symmetry_advisory_ok", sym <= 0.01 ? 1.0 : 0.0);
  return rep;
}

ExperimentReport tail_experiment(std::uint64_t n, double A, std::uint64_t seed, std::shared_ptr<const PhiGrid> grid,
                                 unsigned workers) {
  const LimitConfig cfg{A, TailMode::gaussian_surrogate, std::move(grid), seed};
  ExperimentReport rep = tail_experiment(sample_limit_draws(haar_source(seed), n, cfg, workers));
  rep.params = {{"seed", seed}, {"n", n}, {"cutoff", A}, {"tail_mode", "gaussian_surrogate"}};
  return rep;
}

ExperimentReport small_norm_experiment(std::uint64_t n, std::span<const double> eps_list, std::uint64_t seed,
                                       unsigned workers) {
  if (eps_list.empty()) throw ContractViolation("small_norm_experiment: empty eps list");
  require_n(n, 1000, "small_norm_experiment");
  const LatticeSource source = haar_source(seed);
  std::vector<double> n1(n);
  parallel_for(n, workers, [&](std::uint64_t i) { n1[i] = first_minimum(source(i)); });

  ExperimentReport rep;
  rep.experiment = "small-norm";
  rep.params = {{"seed", seed}, {"n", n}, {"eps", std::vector<double>(eps_list.begin(), eps_list.end())}};
  std::vector<double> ratios;
  for (double eps : eps_list) {
    const auto hits = std::count_if(n1.begin(), n1.end(), [&](double x) { return x < eps; });
    ratios.push_back(static_cast<double>(hits) / static_cast<double>(n) / (eps * eps));
    rep.set_stat("ratio_eps" + real_name(eps), ratios.back());
  }
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  double avg = 0.0;
  for (double r : ratios) avg += r;
  avg /= static_cast<double>(ratios.size());
  rep.set_stat("expected", kPi / (2.0 * kZeta2));
  rep.set_stat("tail_constant_estimate", avg);
  rep.set_stat("spread", lo > 0.0 ? hi / lo - 1.0 : INFINITY);
  rep.set_pass("ratios_in_[0.85,1.05]", lo >= 0.85 && hi <= 1.05);
  rep.set_pass("ratios_within_15pct", lo > 0.0 && hi <= 1.15 * lo);
  return rep;
}

ExperimentReport identity_experiment(std::uint64_t n, std::uint64_t seed, unsigned workers) {
  require_n(n, 1, "identity_experiment");
  const LatticeSource source = haar_source(seed);
  struct Row {
    double det_err, n1n2, shape_err, norm_err, dual_err;
  };
  std::vector<Row> rows(n);
  parallel_for(n, workers, [&](std::uint64_t i) {
    const Basis2 L = source(i);
    const ReducedFrame f = gauss_reduce(L);
    const ShapeCoords s = shape_coords(f);
    const double X1 = s.X1, X2 = s.X2, X3 = s.X3;
    const double v = norm(combine(2, f.e1, 3, f.e2));
    const double ak = a_k(2, 3, X1, X2);
    const Basis2 back = dual(dual(L));
    const Mat2 &a = L.matrix(), &b = back.matrix();
    const double scale = std::max({1.0, std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
    rows[i] = {std::abs(std::abs(f.orientation()) - 1.0), f.n1 * f.n2,
               std::abs(X1 * X3 - (1.0 + X2 * X2)) / (1.0 + X2 * X2), std::abs(v * std::sqrt(X1) - std::sqrt(ak)) /
                                                                           std::sqrt(ak),
               std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                         std::abs(a.a22 - b.a22)}) /
                   scale};
  });
  Row worst{0.0, INFINITY, 0.0, 0.0, 0.0};
  for (const Row& r : rows) {
    worst.det_err = std::max(worst.det_err, r.det_err);
    worst.n1n2 = std::min(worst.n1n2, r.n1n2);
    worst.shape_err = std::max(worst.shape_err, r.shape_err);
    worst.norm_err = std::max(worst.norm_err, r.norm_err);
    worst.dual_err = std::max(worst.dual_err, r.dual_err);
  }
  ExperimentReport rep;
  rep.experiment = "verify-identities";
  rep.params = {{"seed", seed}, {"n", n}};
  rep.set_stat("max_det_error", worst.det_err);
  rep.set_stat("min_n1_n2", worst.n1n2);
  rep.set_stat("max_shape_identity_rel_error", worst.shape_err);
  rep.set_stat("max_norm_identity_rel_error", worst.norm_err);
  rep.set_stat("max_dual_round_trip_error", worst.dual_err);
  rep.set_pass("det_within_1e-9", worst.det_err <= 1e-9);
  rep.set_pass("n1_n2_at_least_1", worst.n1n2 >= 1.0 - 1e-12);
  rep.set_pass("shape_identity_within_1e-9", worst.shape_err <= 1e-9);
  rep.set_pass("norm_identity_within_1e-9", worst.norm_err <= 1e-9);
  rep.set_pass("dual_round_trip_within_1e-12", worst.dual_err <= 1e-12);
  return rep;
}

}  // namespace lattice_lab
