// Command-line driver for the lattice counting experiments.
//
// Exit status: 0 when every criterion of the report passes, 2 when one
// fails, 1 on usage or I/O errors.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "lattice_lab/errors.hpp"
#include "lattice_lab/experiments.hpp"
#include "lattice_lab/haar_sampling.hpp"
#include "lattice_lab/limit_law.hpp"
#include "lattice_lab/parallel.hpp"
#include "lattice_lab/report.hpp"
#include "lattice_lab/spectral_sums.hpp"
#include "lattice_lab/statistics.hpp"

using namespace lattice_lab;

namespace {

struct Flags {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;  // 0: subcommand default
  std::vector<double> t;
  std::vector<double> cutoff;
  double alpha = 0.5;
  double phi_tol = 1e-10;
  unsigned workers = 1;
  std::string out = "-";
  std::string format;
  std::uint64_t n_limit = 100000;
  double r_inner = 0.0;
  double r_outer = 1.0;
  std::string tail_mode = "gaussian";
};

nlohmann::ordered_json flag_record(const Flags& f) {
  return {{"seed", f.seed},       {"n", f.n},     {"t", f.t},          {"cutoff", f.cutoff},
          {"alpha", f.alpha},     {"phi_tol", f.phi_tol}, {"workers", f.workers}, {"out", f.out},
          {"format", f.format}};
}

std::shared_ptr<const PhiGrid> make_grid(const Flags& f) {
  return std::make_shared<const PhiGrid>(PhiEvaluator(f.phi_tol), PhiGrid::kBulkCells);
}

using Clock = std::chrono::steady_clock;

// Adds every flag to params (entries set by the experiment win) and emits.
int finish(ExperimentReport rep, const Flags& f, Clock::time_point start) {
  const nlohmann::ordered_json flags = flag_record(f);
  for (const auto& [k, v] : flags.items())
    if (!rep.params.contains(k)) rep.params[k] = v;
  rep.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  emit(rep, f.out, parse_format(f.format));
  return rep.all_pass() ? 0 : 2;
}

ExperimentReport summary(const std::string& name, const EmpiricalDistribution& d) {
  ExperimentReport rep;
  rep.experiment = name;
  rep.set_stat("mean", d.mean());
  rep.set_stat("stderr", d.stderr_mean());
  rep.set_stat("median", d.median());
  rep.set_stat("min", d.samples().front());
  rep.set_stat("max", d.samples().back());
  return rep;
}

template <class T>
void default_to(std::vector<T>& v, std::initializer_list<T> values) {
  if (v.empty()) v = values;
}

int run_sample_lattices(Flags& f, Clock::time_point start) {
  if (f.n == 0) f.n = 1000;
  std::vector<Basis2> out(f.n);
  parallel_for(f.n, f.workers, [&](std::uint64_t i) { out[i] = sample_haar({f.seed, i}); });
  if (f.format == "json") {
    std::vector<double> n1(f.n);
    for (std::size_t i = 0; i < out.size(); ++i) n1[i] = first_minimum(out[i]);
    ExperimentReport rep = summary("sample-lattices", EmpiricalDistribution(std::move(n1)));
    return finish(rep, f, start);
  }
  write_text(f.out, [&](std::ostream& os) { write_lattices_csv(os, f.seed, out); });
  return 0;
}

int run_count_error(Flags& f, Clock::time_point start) {
  if (f.n == 0) f.n = 1000;
  default_to(f.t, {100.0});
  const std::vector<ErrorSample> samples = error_samples(f.n, f.t.front(), f.seed, f.workers);
  if (f.format == "json") {
    std::vector<double> v;
    for (const ErrorSample& e : samples) v.push_back(e.normalized);
    return finish(summary("count-error", EmpiricalDistribution(std::move(v))), f, start);
  }
  write_text(f.out, [&](std::ostream& os) { write_errors_csv(os, f.seed, samples); });
  return 0;
}

int run_sample_limit(Flags& f, Clock::time_point start) {
  if (f.n == 0) f.n = 10000;
  default_to(f.cutoff, {100.0});
  const TailMode mode = f.tail_mode == "truncate" ? TailMode::truncate : TailMode::gaussian_surrogate;
  const LimitConfig cfg{f.cutoff.front(), mode, make_grid(f), f.seed};
  const std::vector<double> draws = sample_limit_draws(haar_source(f.seed), f.n, cfg, f.workers);
  if (f.format == "json") {
    ExperimentReport rep = summary("sample-limit", EmpiricalDistribution(draws));
    rep.params["tail_mode"] = f.tail_mode;
    return finish(rep, f, start);
  }
  emit(draws, f.seed, f.out, Format::csv);
  return 0;
}

int run_report(Flags& f, Clock::time_point start, const std::string& which) {
  if (f.format.empty()) f.format = "json";
  ExperimentReport rep;
  if (which == "compare-laws") {
    if (f.n == 0) f.n = 20000;
    default_to(f.t, {50.0, 200.0, 500.0});
    default_to(f.cutoff, {100.0});
    rep = compare_laws(f.n, f.n_limit, f.t, f.cutoff.front(), f.seed, make_grid(f), f.workers);
  } else if (which == "delta") {
    if (f.n == 0) f.n = 2000;
    default_to(f.t, {1000.0});
    default_to(f.cutoff, {20.0, 80.0});
    rep = delta_trend(f.n, f.t.front(), f.cutoff, f.alpha, f.seed, f.workers);
  } else if (which == "equidist") {
    if (f.n == 0) f.n = 50000;
    default_to(f.t, {1000.0});
    const std::vector<PrimeIndex> ks{{1, 0}, {0, 1}, {1, 1}};
    rep = equidistribution_experiment(f.n, f.t.front(), ks, f.seed, f.workers);
  } else if (which == "siegel-check") {
    if (f.n == 0) f.n = 200000;
    rep = siegel_mean_check(f.n, f.r_inner, f.r_outer, f.seed, f.workers);
  } else if (which == "tail") {
    if (f.n == 0) f.n = 1000000;
    default_to(f.cutoff, {100.0});
    rep = tail_experiment(f.n, f.cutoff.front(), f.seed, make_grid(f), f.workers);
    const std::vector<double> eps{0.05, 0.1, 0.2};
    merge_report(rep, small_norm_experiment(f.n, eps, f.seed, f.workers), "small_norm_");
  } else {
    if (f.n == 0) f.n = 100000;
    rep = identity_experiment(f.n, f.seed, f.workers);
    const PhiEvaluator ev(f.phi_tol);
    const double z = ev.zeta_table()[0];  // zeta(3/2)
    const double e0 = std::abs(ev(0.0) + std::numbers::sqrt2 / 2 * z);
    const double eh = std::abs(ev(0.5) - std::numbers::sqrt2 / 2 * (1.0 - 1.0 / std::numbers::sqrt2) * z);
    rep.set_stat("phi_0_error", e0);
    rep.set_stat("phi_half_error", eh);
    rep.set_pass("phi_special_values_within_1e-8", e0 <= 1e-8 && eh <= 1e-8);
  }
  return finish(std::move(rep), f, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on lattice point counting errors"};
  app.require_subcommand(1);
  Flags f;

  auto* lattices = app.add_subcommand("sample-lattices", "Haar-random unimodular bases (CSV)");
  auto* count = app.add_subcommand("count-error", "normalized counting errors R(tD^2, L)/sqrt(t) (CSV)");
  auto* limit = app.add_subcommand("sample-limit", "draws of the limit law S (CSV)");
  auto* compare = app.add_subcommand("compare-laws", "KS distance between error law and limit law");
  auto* delta = app.add_subcommand("delta", "counting error against the truncated prime sum");
  auto* equidist = app.add_subcommand("equidist", "equidistribution of the phases theta_k");
  auto* siegel = app.add_subcommand("siegel-check", "mean prime-vector count in an annulus");
  auto* tail = app.add_subcommand("tail", "tail index and moments of S, small-norm law of |L|_1");
  auto* identities = app.add_subcommand("verify-identities", "reduction and shape identities");

  for (auto* sub : {lattices, count, limit, compare, delta, equidist, siegel, tail, identities}) {
    sub->add_option("--seed", f.seed, "master seed")->required();
    sub->add_option("--n", f.n, "number of lattices or draws");
    sub->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "output path, '-' for stdout");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }
  for (auto* sub : {count, compare, delta, equidist}) sub->add_option("--t", f.t, "dilation(s) t");
  for (auto* sub : {limit, compare, delta, tail}) sub->add_option("--cutoff", f.cutoff, "cutoff(s) A");
  for (auto* sub : {limit, compare, tail, identities}) {
    sub->add_option("--phi-tol", f.phi_tol, "target absolute error of phi")->check(CLI::PositiveNumber);
  }
  delta->add_option("--alpha", f.alpha, "threshold alpha");
  compare->add_option("--n-limit", f.n_limit, "number of limit-law draws");
  siegel->add_option("--r-inner", f.r_inner, "inner radius");
  siegel->add_option("--r-outer", f.r_outer, "outer radius");
  limit->add_option("--tail-mode", f.tail_mode, "gaussian or truncate")
      ->check(CLI::IsMember({"gaussian", "truncate"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const auto start = Clock::now();
  try {
    if (*lattices) return run_sample_lattices(f, start);
    if (*count) return run_count_error(f, start);
    if (*limit) return run_sample_limit(f, start);
    return run_report(f, start, app.get_subcommands().front()->get_name());
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
