#include "lattice_lab/spectral_sums.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <set>

namespace lattice_lab {

namespace {

constexpr int kMaxTerms = 90;
constexpr double kPi = std::numbers::pi;

double centered(double theta) {
  const double u = wrap_unit(theta);
  return u > 0.5 ? u - 1.0 : u;
}

template <class Phi>
double s_a_prime_impl(const ReducedFrame& frame, double t, double A, const Phi& phi_fn) {
  if (!(t >= 0.0)) throw ContractViolation("s_a_prime: t must be >= 0");
  double sum = 0.0;
  for_each_prime_index(frame, A, [&](PrimeIndex, Vec2, double r) {
    sum += phi_fn(wrap_unit(t * r)) * inv_pow_three_halves(r);
  });
  return 2.0 / kPi * sum;
}

}  // namespace

double wrap_unit(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

PhiEvaluator::PhiEvaluator(double target_abs_error) : target_(target_abs_error) {
  if (!(target_abs_error > 0.0)) throw ContractViolation("PhiEvaluator: target error must be positive");
  // d_k = zeta(3/2 - k) (2 pi)^k / k! * Re[e^{-3 pi i/4} i^k]
  const double phase[4] = {-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2,
                           -std::numbers::sqrt2 / 2};
  std::vector<double> all;
  double scale = 1.0;  // (2 pi)^k / k!
  for (int k = 0; k <= kMaxTerms; ++k) {
    if (k > 0) scale *= 2.0 * kPi / k;
    const double z = boost::math::zeta(1.5 - k);
    zeta_.push_back(z);
    all.push_back(z * scale * phase[k % 4]);
  }
  // Keep the shortest prefix whose tail is below target at |theta~| = 1/2.
  std::size_t keep = all.size();
  double tail = 0.0;
  for (std::size_t k = all.size(); k-- > 0;) {
    tail += std::abs(all[k]) * std::pow(0.5, static_cast<double>(k));
    if (tail > 1e-3 * target_) break;
    keep = k;
  }
  coeff_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(keep, 1)));
  zeta_.resize(coeff_.size());
}

double PhiEvaluator::singular_part(double c) {
  return c > 0.0 ? 2.0 * std::sqrt(kPi) * std::sqrt(2.0 * kPi * c) : 0.0;
}

double PhiEvaluator::regular_part(double c) const {
  double acc = 0.0;
  for (std::size_t k = coeff_.size(); k-- > 0;) acc = acc * c + coeff_[k];
  return acc;
}

double PhiEvaluator::operator()(double theta) const {
  const double c = centered(theta);
  return regular_part(c) + singular_part(c);
}

namespace {

// 2 sqrt(pi) sqrt(2 pi u) = kSingular sqrt(u).
constexpr double kSingular = 2.0 * std::numbers::pi * std::numbers::sqrt2;

}  // namespace

PhiGrid::PhiGrid(const PhiEvaluator& ev, std::size_t cells) : cells_(cells), inv_h_(static_cast<double>(cells)) {
  if (cells < 4) throw ContractViolation("PhiGrid: need at least 4 cells");
  // phi(u) - kSingular sqrt(u) is smooth on the closed interval [0, 1].
  table_.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double u = static_cast<double>(i) / inv_h_;
    table_[i] = u <= 0.5 ? ev.regular_part(u) : ev.regular_part(u - 1.0) - kSingular * std::sqrt(u);
  }
}

double PhiGrid::operator()(double theta) const {
  // Bulk path: theta usually arrives in [0, 1) already.
  const double u = (theta >= 0.0 && theta < 1.0) ? theta : wrap_unit(theta);
  const double pos = u * inv_h_;
  const auto i = static_cast<std::ptrdiff_t>(pos);  // pos >= 0: truncation is floor
  // Nodes i-1, i, i+1, i+2, shifted inward at both ends of the table.
  const auto last = static_cast<std::ptrdiff_t>(cells_);
  const std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, last - 3);
  const double x = pos - static_cast<double>(base);  // position relative to node `base`
  const double* f = table_.data() + base;
  // Lagrange weights on nodes 0, 1, 2, 3.
  constexpr double kSixth = 1.0 / 6.0;
  const double x0 = x, x1 = x - 1.0, x2 = x - 2.0, x3 = x - 3.0;
  const double w0 = -x1 * x2 * x3 * kSixth;
  const double w1 = x0 * x2 * x3 * 0.5;
  const double w2 = -x0 * x1 * x3 * 0.5;
  const double w3 = x0 * x1 * x2 * kSixth;
  return w0 * f[0] + w1 * f[1] + w2 * f[2] + w3 * f[3] + kSingular * std::sqrt(u);
}

double phi(double theta, const PhiEvaluator& ev) { return ev(theta); }

double theta_k(const ReducedFrame& frame, PrimeIndex k, double t) {
  if (!(t >= 0.0)) throw ContractViolation("theta_k: t must be >= 0");
  return wrap_unit(t * norm(combine(k.k1, frame.e1, k.k2, frame.e2)));
}

double h_sum(const Basis2& basis, double t, double A) {
  const ReducedFrame frame = gauss_reduce(basis);
  double sum = 0.0;
  // Each prime index stands for the pair +-v; multiples m v cover the rest.
  for_each_prime_index(frame, A, [&](PrimeIndex, Vec2, double r) {
    for (std::int64_t m = 1; static_cast<double>(m) * r <= A; ++m) {
      const double len = static_cast<double>(m) * r;
      sum += 2.0 * std::cos(2.0 * kPi * t * len - 0.75 * kPi) * inv_pow_three_halves(len);
    }
  });
  return sum / kPi;
}

double s_a_prime(const ReducedFrame& frame, double t, double A, const PhiEvaluator& ev) {
  return s_a_prime_impl(frame, t, A, ev);
}

double s_a_prime(const ReducedFrame& frame, double t, double A, const PhiGrid& grid) {
  return s_a_prime_impl(frame, t, A, grid);
}

double w_coefficient(const ReducedFrame& frame, PrimeIndex k) {
  const Vec2 v = combine(k.k1, frame.e1, k.k2, frame.e2);
  return (v.x * v.x - v.y * v.y) / norm(v);
}

namespace detail {
double z_free_witness_unchecked(const ReducedFrame& frame, std::span<const WitnessTerm> terms) {
  double s = 0.0;
  for (const auto& [p, k] : terms) s += static_cast<double>(p) * w_coefficient(frame, k);
  return std::abs(s);
}
}  // namespace detail

double z_free_witness(const ReducedFrame& frame, std::span<const WitnessTerm> terms) {
  std::set<PrimeIndex> seen;
  bool any_nonzero = false;
  for (const auto& [p, k] : terms) {
    if (!seen.insert(k).second) throw ContractViolation("z_free_witness: duplicate prime index");
    any_nonzero = any_nonzero || p != 0;
  }
  if (!any_nonzero) throw ContractViolation("z_free_witness: all coefficients are zero");
  return detail::z_free_witness_unchecked(frame, terms);
}

OvalGeometry oval_geometry(const Mat2& D, Vec2 xi) {
  if (xi.x == 0.0 && xi.y == 0.0) throw ContractViolation("oval_geometry: xi must be nonzero");
  const Vec2 dt = D.transpose() * xi;
  const double y = norm(dt);
  const double r = norm(xi);
  OvalGeometry g;
  g.x_gamma = D * ((1.0 / y) * dt);
  g.rho_gamma = (r * r * r) / (y * y * y);
  g.Y_gamma = y;
  return g;
}

}  // namespace lattice_lab
