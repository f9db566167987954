#include "lattice_lab/disk_counting.hpp"

#include <cmath>
#include <numbers>

namespace lattice_lab {

namespace {

// Largest radius whose disk count stays far below the int64 range.
constexpr double kMaxRadius = 1.0e9;

// Unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DoubleDouble mul(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p.hi, p.lo);
}

DoubleDouble from_int(std::int64_t n) {
  const auto hi = static_cast<double>(n);
  return {hi, static_cast<double>(n - static_cast<std::int64_t>(hi))};
}

}  // namespace

double EllipseForm::area() const { return std::numbers::pi / std::sqrt(q11 * q22 - q12 * q12); }

namespace detail {

int boundary_sign(const Mat2& basis, std::int64_t n1, std::int64_t n2, Vec2 center, double t) {
  const DoubleDouble a = from_int(n1), b = from_int(n2);
  const DoubleDouble px = add(add(mul({basis.a11, 0.0}, a), mul({basis.a12, 0.0}, b)), {-center.x, 0.0});
  const DoubleDouble py = add(add(mul({basis.a21, 0.0}, a), mul({basis.a22, 0.0}, b)), {-center.y, 0.0});
  const DoubleDouble r = add(add(mul(px, px), mul(py, py)), two_prod(-t, t));
  const double s = r.hi + r.lo;
  return (s > 0.0) - (s < 0.0);
}

std::int64_t count_points_unchecked(const Mat2& basis, double t, Vec2 center) {
  if (!(t >= 0.0)) throw ContractViolation("count_points: t must be >= 0");
  if (t > kMaxRadius) throw OverflowError("count_points: count for t > 1e9 would overflow int64");
  const ReducedFrame f = detail::reduce_unchecked(basis);
  const IntMat2& U = f.coefficients;
  const double t2 = t * t;
  const double X1 = f.n1 * f.n1;
  const double D = f.orientation();

  // Frame arithmetic decides clear cases; points within a relative 1e-9 of
  // the circle are re-decided from the input basis in double-double.
  auto inside = [&](std::int64_t a, std::int64_t b) {
    const Vec2 p = combine(a, f.e1, b, f.e2) - center;
    const double r = norm2(p) - t2;
    if (std::abs(r) > 1e-9 * (t2 + norm2(center)) + 1e-300) return r <= 0.0;
    return detail::boundary_sign(basis, U.a11 * a + U.a12 * b, U.a21 * a + U.a22 * b, center, t) <= 0;
  };

  // |det(e1, p - center)| <= n1 t bounds the e2-coefficient b of every point.
  const double c = cross(f.e1, center);
  const double b_lo = std::min((c - f.n1 * t) / D, (c + f.n1 * t) / D);
  const double b_hi = std::max((c - f.n1 * t) / D, (c + f.n1 * t) / D);
  const auto row_lo = static_cast<std::int64_t>(std::floor(b_lo)) - 1;
  const auto row_hi = static_cast<std::int64_t>(std::ceil(b_hi)) + 1;

  std::int64_t total = 0;
  for (std::int64_t b = row_lo; b <= row_hi; ++b) {
    const Vec2 w = static_cast<double>(b) * f.e2 - center;
    const double mid = -dot(f.e1, w) / X1;
    const double cw = cross(f.e1, w);
    const double disc = X1 * t2 - cw * cw;
    const double half = disc > 0.0 ? std::sqrt(disc) / X1 : 0.0;
    std::int64_t lo = 0, hi = -1;
    if (!detail::integer_interval(mid - half, mid + half, [&](std::int64_t a) { return inside(a, b); }, lo, hi)) {
      continue;
    }
    if (__builtin_add_overflow(total, hi - lo + 1, &total)) throw OverflowError("count_points: int64 overflow");
  }
  return total;
}

}  // namespace detail

std::int64_t count_points(const Basis2& basis, double t, Vec2 center) {
  return detail::count_points_unchecked(basis.matrix(), t, center);
}

ErrorSample error_sample(const Basis2& basis, double t) {
  if (!(t > 0.0)) throw ContractViolation("error_sample: t must be > 0");
  ErrorSample s;
  s.t = t;
  s.count = count_points(basis, t);
  s.error = static_cast<double>(s.count) - std::numbers::pi * t * t;
  s.normalized = s.error / std::sqrt(t);
  return s;
}

DiskReduction ellipse_to_disk(const EllipseForm& ell) {
  const double det = ell.q11 * ell.q22 - ell.q12 * ell.q12;
  if (!(ell.q11 > 0.0) || !(det > 0.0)) throw ContractViolation("ellipse_to_disk: form is not positive definite");
  // Symmetric square root of Q, then normalized to determinant 1:
  // |M v|^2 = q(v) / sqrt(det Q).
  const double sd = std::sqrt(det);
  const double tau = std::sqrt(ell.q11 + ell.q22 + 2.0 * sd);
  const Mat2 root{(ell.q11 + sd) / tau, ell.q12 / tau, ell.q12 / tau, (ell.q22 + sd) / tau};
  const double norm_factor = 1.0 / std::sqrt(sd);
  return {root.scaled(norm_factor), norm_factor};
}

}  // namespace lattice_lab
