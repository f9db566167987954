// Acceptance run: one PASS/FAIL line per criterion, each with its measured
// statistics and wall time against the time budget. Exit status 0 only when
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "lattice_lab/disk_counting.hpp"
#include "lattice_lab/experiments.hpp"
#include "lattice_lab/haar_sampling.hpp"
#include "lattice_lab/limit_law.hpp"
#include "lattice_lab/rng.hpp"
#include "lattice_lab/spectral_sums.hpp"
#include "oracles/oracles.hpp"

using namespace lattice_lab;

namespace {

// Fixed before the first run; never tuned.
constexpr std::uint64_t kSeed = 20261016;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::shared_ptr<const PhiGrid> bulk_grid() {
  static const auto grid = std::make_shared<const PhiGrid>(PhiEvaluator(), PhiGrid::kBulkCells);
  return grid;
}

// Shared by criteria 10 and 11.
const std::vector<double>& tail_draws() {
  static const std::vector<double> draws = [] {
    const LimitConfig cfg{100.0, TailMode::gaussian_surrogate, bulk_grid(), kSeed};
    return sample_limit_draws(haar_source(kSeed), 1000000, cfg, workers());
  }();
  return draws;
}

Outcome exact_counting() {
  int mismatches = 0;
  CounterRng rng(derive_key({kSeed, 1}));
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Basis2 b = sample_haar({kSeed, i});
    const double t = 30.0 * rng.uniform();
    mismatches += count_points(b, t) != oracle::count_grid(b.matrix(), t);
  }
  const std::int64_t z2 = count_points(Basis2(), 5.0);
  return {mismatches == 0 && z2 == 81,
          "oracle mismatches " + std::to_string(mismatches) + "/100, N(5D^2, Z^2) = " + std::to_string(z2)};
}

Outcome identities() {
  const ExperimentReport r = identity_experiment(100000, kSeed, workers());
  return {r.all_pass(), fmt("det err %.2e", r.stat("max_det_error")) + fmt(", min n1n2 %.12f", r.stat("min_n1_n2")) +
                            fmt(", shape %.2e", r.stat("max_shape_identity_rel_error")) +
                            fmt(", norm %.2e", r.stat("max_norm_identity_rel_error")) +
                            fmt(", dual %.2e", r.stat("max_dual_round_trip_error"))};
}

Outcome siegel() {
  const ExperimentReport ball = siegel_mean_check(200000, 0.0, 1.0, kSeed, workers());
  const ExperimentReport ann = siegel_mean_check(200000, 1.0, 2.0, kSeed, workers());
  return {ball.all_pass() && ann.all_pass(),
          fmt("ball mean %.5f", ball.stat("mean")) + fmt(" (6/pi = %.5f", ball.stat("expected")) +
              fmt(", rel %.4f)", ball.stat("relative_error")) + fmt(", annulus mean %.5f", ann.stat("mean")) +
              fmt(" (18/pi = %.5f", ann.stat("expected")) + fmt(", rel %.4f)", ann.stat("relative_error"))};
}

Outcome small_norm() {
  const std::vector<double> eps{0.05, 0.1, 0.2};
  const ExperimentReport r = small_norm_experiment(1000000, eps, kSeed, workers());
  return {r.all_pass(), fmt("ratios %.4f", r.stat("ratio_eps0.05")) + fmt(" / %.4f", r.stat("ratio_eps0.1")) +
                            fmt(" / %.4f", r.stat("ratio_eps0.2")) + fmt(" (expected %.4f)", r.stat("expected")) +
                            fmt(", spread %.3f", r.stat("spread"))};
}

Outcome phi_correctness() {
  const PhiEvaluator ev;
  CounterRng rng(derive_key({kSeed, 5}));
  double worst_excess = 0.0, worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const double th = rng.uniform();
    const oracle::PhiValue ref = oracle::phi_direct(th);
    const double err = std::abs(ev(th) - ref.value), tol = std::max(1e-8, ref.bound);
    bad += !(err <= tol);
    worst_excess = std::max(worst_excess, err / tol);
    if (ref.bound < 1e-8) worst = std::max(worst, err);
  }
  const double z = ev.zeta_table()[0];
  const double e0 = std::abs(ev(0.0) + std::numbers::sqrt2 / 2 * z);
  const double eh = std::abs(ev(0.5) - std::numbers::sqrt2 / 2 * (1.0 - 1.0 / std::numbers::sqrt2) * z);
  return {bad == 0 && e0 <= 1e-8 && eh <= 1e-8,
          "out of tolerance " + std::to_string(bad) + "/1000" + fmt(", max |err| %.2e", worst) +
              fmt(", phi(0) err %.2e", e0) + fmt(", phi(1/2) err %.2e", eh)};
}

Outcome gradient() {
  CounterRng rng(derive_key({kSeed, 6}));
  const double h = 1e-5;
  double worst = 0.0;
  int frame_changes = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Basis2 b = sample_haar({kSeed, i});
    const ReducedFrame f = gauss_reduce(b);
    std::int64_t k1 = 0, k2 = 0;
    do {
      k1 = static_cast<std::int64_t>(rng.uniform() * 6);
      k2 = static_cast<std::int64_t>(rng.uniform() * 11) - 5;
    } while ((k1 == 0 && k2 == 0) || !is_canonical_prime_index(k1, k2));
    // |k1 e1 + k2 e2| of the re-reduced lattice delta(1 + s) L, and whether
    // that frame is delta(1 + s) applied to the frame of L.
    bool changed = false;
    auto flowed = [&](double s) {
      const Mat2 d = Mat2::diagonal(1.0 + s, 1.0 / (1.0 + s));
      const ReducedFrame g = gauss_reduce(Basis2(d * b.matrix()));
      const Vec2 d1 = d * f.e1, d2 = d * f.e2;
      changed = changed || !((norm(g.e1 - d1) < 1e-9 || norm(g.e1 + d1) < 1e-9) &&
                             (norm(g.e2 - d2) < 1e-9 || norm(g.e2 + d2) < 1e-9));
      return norm(combine(k1, g.e1, k2, g.e2));
    };
    const double fd = (flowed(h) - flowed(-h)) / (2.0 * h);
    if (changed) {
      ++frame_changes;
      continue;
    }
    worst = std::max(worst, std::abs(w_coefficient(f, {k1, k2}) - fd) / std::max(1.0, std::abs(fd)));
  }
  return {worst <= 1e-6 && frame_changes <= 10,
          fmt("max rel error %.2e", worst) + ", frame changed inside the stencil in " +
              std::to_string(frame_changes) + "/1000"};
}

Outcome equidistribution() {
  const std::vector<PrimeIndex> ks{{1, 0}, {0, 1}, {1, 1}};
  const ExperimentReport r = equidistribution_experiment(50000, 1000.0, ks, kSeed, workers());
  std::string d;
  for (const char* k : {"(1,0)", "(0,1)", "(1,1)"}) {
    d += std::string(k) + fmt(" p %.3g", r.stat(std::string("chi2_p_") + k)) +
         fmt(" |m| %.4f", r.stat(std::string("modulus_") + k)) +
         fmt(" psi %.4f; ", r.stat(std::string("psi_coupling_") + k));
  }
  double pair = 0.0;
  for (const auto& [name, v] : r.stats)
    if (name.rfind("pair_", 0) == 0) pair = std::max(pair, v);
  return {r.all_pass(), d + fmt("max pair modulus %.4f", pair)};
}

Outcome convergence_in_law() {
  const std::vector<double> ts{50.0, 200.0, 500.0};
  const ExperimentReport r = compare_laws(20000, 100000, ts, 100.0, kSeed, bulk_grid(), workers());
  return {r.all_pass(), fmt("KS t=50 %.4f", r.stat("ks_t50")) + fmt(", t=200 %.4f", r.stat("ks_t200")) +
                            fmt(", t=500 %.4f", r.stat("ks_t500"))};
}

Outcome truncation() {
  const ExperimentReport r = truncation_check(100000, 100.0, kSeed, bulk_grid(), workers());
  return {r.all_pass(), fmt("KS(A=100 surrogate, A=400 truncated) %.5f", r.stat("ks"))};
}

Outcome tail_and_moments() {
  const ExperimentReport r = tail_experiment(tail_draws());
  const bool ok = r.passed("hill_index_in_[1.18,1.48]") && r.passed("moment_1.2_stable") &&
                  r.passed("moment_1.5_increasing");
  return {ok, fmt("Hill %.4f", r.stat("hill_index")) + fmt(", E|S|^1.2 %.4f", r.stat("moment_1.2_n10000")) +
                  fmt(" / %.4f", r.stat("moment_1.2_n100000")) + fmt(" / %.4f", r.stat("moment_1.2_n1000000")) +
                  fmt(" (ratios %.4f", r.stat("moment_1.2_ratio_1")) + fmt(", %.4f)", r.stat("moment_1.2_ratio_2")) +
                  fmt(", E|S|^1.5 %.3f", r.stat("moment_1.5_n10000")) + fmt(" / %.3f", r.stat("moment_1.5_n100000")) +
                  fmt(" / %.3f", r.stat("moment_1.5_n1000000"))};
}

Outcome zero_mean() {
  const ExperimentReport r = tail_experiment(tail_draws());
  const double sym = r.stat("symmetry_ks");
  return {r.passed("zero_mean"), fmt("mean %.5f", r.stat("mean")) + fmt(", stderr %.5f", r.stat("stderr")) +
                                     fmt("; advisory symmetry KS(S,-S) %.4f", sym) +
                                     (sym <= 0.01 ? " (within 0.01)" : " (above 0.01, advisory only)")};
}

Outcome reduction_trend() {
  const std::vector<double> cutoffs{20.0, 80.0};
  const ExperimentReport r = delta_trend(2000, 1000.0, cutoffs, 0.5, kSeed, workers());
  return {r.passed("median_decreasing"),
          fmt("median Delta A=20 %.4f", r.stat("median_delta_A20")) +
              fmt(", A=80 %.4f", r.stat("median_delta_A80")) +
              fmt("; P(Delta >= 0.5) %.4f", r.stat("frequency_A20")) + fmt(" / %.4f", r.stat("frequency_A80"))};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact counting", 5, exact_counting},
      {2, "reduction and identities", 30, identities},
      {3, "Siegel mean value", 60, siegel},
      {4, "small-norm law", 120, small_norm},
      {5, "phi correctness", 10, phi_correctness},
      {6, "gradient check", 10, gradient},
      {7, "equidistribution", 120, equidistribution},
      {8, "convergence in law", 600, convergence_in_law},
      {9, "truncation validity", 300, truncation},
      {10, "tail and moments", 600, tail_and_moments},
      {11, "zero mean and symmetry", 600, zero_mean},
      {12, "reduction trend", 600, reduction_trend},
  };
  std::printf("seed %llu, workers %u\n", static_cast<unsigned long long>(kSeed), workers());
  std::fflush(stdout);
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool ok = o.ok && in_time;
    failures += !ok;
    std::printf("%s criterion %d (%s): %s [%.1f s of %.0f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
