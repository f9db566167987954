#pragma once

// Exact 2D lattice primitives: Lagrange-Gauss reduction with the (e1, e2)
// sign conventions, duality, primality, prime-index enumeration and the
// shape coordinates (X1, X2, X3, X4) of a reduced frame.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lattice_lab/errors.hpp"
#include "lattice_lab/geometry.hpp"

namespace lattice_lab {

/// Columns generate a unimodular lattice: |det - 1| <= kDetTolerance.
class Basis2 {
 public:
  static constexpr double kDetTolerance = 1e-12;

  Basis2() = default;
  explicit Basis2(const Mat2& m);
  static Basis2 from_columns(Vec2 c1, Vec2 c2) { return Basis2(Mat2::from_columns(c1, c2)); }
  static Basis2 from_entries(double b11, double b12, double b21, double b22) {
    return Basis2(Mat2{b11, b12, b21, b22});
  }

  const Mat2& matrix() const { return m_; }
  double b11() const { return m_.a11; }
  double b12() const { return m_.a12; }
  double b21() const { return m_.a21; }
  double b22() const { return m_.a22; }
  Vec2 col1() const { return m_.col1(); }
  Vec2 col2() const { return m_.col2(); }
  double det() const { return m_.det(); }

  friend bool operator==(const Basis2&, const Basis2&) = default;

 private:
  Mat2 m_{};
};

/// Successive-minima basis (e1, e2) of a lattice.
///
/// n1 = |e1| is the first minimum, n2 = |e2| the second. Both vectors have a
/// positive first coordinate; when a first coordinate vanishes the second is
/// positive instead and tie_broken is set. tie_broken is also set whenever
/// several lattice vectors compete for e1 or e2 (e.g. the square lattice).
/// `coefficients` expresses e1 and e2 (as its columns) in the input basis.
struct ReducedFrame {
  Vec2 e1{};
  Vec2 e2{};
  double n1 = 0.0;
  double n2 = 0.0;
  bool tie_broken = false;
  IntMat2 coefficients{};

  double orientation() const { return cross(e1, e2); }
  Mat2 matrix() const { return Mat2::from_columns(e1, e2); }
};

/// Coprime pair (k1, k2) with k1 >= 0, and k2 = 1 when k1 = 0.
struct PrimeIndex {
  std::int64_t k1 = 1;
  std::int64_t k2 = 0;

  /// Validating constructor; throws ContractViolation off the canonical set.
  static PrimeIndex make(std::int64_t k1, std::int64_t k2);
  friend constexpr auto operator<=>(const PrimeIndex&, const PrimeIndex&) = default;
};

struct PrimeVector {
  PrimeIndex k;
  double norm = 0.0;
};

struct ShapeCoords {
  double X1 = 0.0;  // |e1|^2
  double X2 = 0.0;  // <e1, e2>
  double X3 = 0.0;  // |e2|^2
  double X4 = 0.0;  // cot of the angle from (1,0) to e1
  int sign_beta = 1;
  bool degenerate_axis = false;  // e1 on the x-axis: X4 is infinite
};

ReducedFrame gauss_reduce(const Basis2& basis);
Basis2 dual(const Basis2& basis);

/// gcd(|k1|, |k2|) == 1; (0, 0) throws.
bool is_prime_vector(std::int64_t k1, std::int64_t k2);
bool is_canonical_prime_index(std::int64_t k1, std::int64_t k2);

/// Prime indices with |k1 e1 + k2 e2| <= A, sorted by norm then (k1, k2).
std::vector<PrimeVector> enumerate_prime_indices(const ReducedFrame& frame, double A);

ShapeCoords shape_coords(const ReducedFrame& frame);

/// A_k(X1, X2) = k1^2 X1^2 + 2 k1 k2 X1 X2 + k2^2 (1 + X2^2).
double a_k(std::int64_t k1, std::int64_t k2, double X1, double X2);

/// (e1)_1^2 - (e1)_2^2 and (e2)_1^2 - (e2)_2^2 written in shape coordinates.
double e1_axis_contrast(const ShapeCoords& s);
double e2_axis_contrast(const ShapeCoords& s);

/// |e1| and |e2| of the lattice spanned by `basis`.
double first_minimum(const Basis2& basis);
double second_minimum(const Basis2& basis);

namespace detail {

/// Reduction without the unimodularity check (test hooks, scaled lattices).
ReducedFrame reduce_unchecked(const Mat2& basis);

inline bool coprime(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b) == 1;
}

/// Residues r mod m (m >= 1) with gcd(r, m) = 1, as a 0/1 mask of length m.
inline void coprime_residues(std::int64_t m, std::vector<unsigned char>& mask) {
  mask.assign(static_cast<std::size_t>(m), 1);
  if (m == 1) return;
  mask[0] = 0;
  std::int64_t rest = m;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    for (std::int64_t r = p; r < m; r += p) mask[static_cast<std::size_t>(r)] = 0;
  }
  if (rest > 1)
    for (std::int64_t r = rest; r < m; r += rest) mask[static_cast<std::size_t>(r)] = 0;
}

/// Smallest/largest integer a with pred(a) around the real interval [lo, hi].
/// pred must describe an interval of integers (convex in a).
template <class Pred>
bool integer_interval(double lo, double hi, Pred&& pred, std::int64_t& out_lo, std::int64_t& out_hi) {
  auto a = static_cast<std::int64_t>(std::ceil(lo));
  auto b = static_cast<std::int64_t>(std::floor(hi));
  if (a > b) {
    // Rounding may hide a boundary point next to an empty real interval.
    const auto mid = static_cast<std::int64_t>(std::floor(0.5 * (lo + hi)));
    if (pred(mid)) {
      a = b = mid;
    } else if (pred(mid + 1)) {
      a = b = mid + 1;
    } else {
      return false;
    }
  }
  while (pred(a - 1)) --a;
  while (a <= b && !pred(a)) ++a;
  if (a > b) return false;
  while (pred(b + 1)) ++b;
  while (b >= a && !pred(b)) --b;
  out_lo = a;
  out_hi = b;
  return true;
}

}  // namespace detail

/// Visits every prime index k with |k1 e1 + k2 e2| <= A in row order
/// (k2 ascending, then k1 ascending). f(PrimeIndex, Vec2 v, double norm).
/// The order is stable under shrinking A, so partial sums are comparable.
template <class F>
void for_each_prime_index(const ReducedFrame& frame, double A, F&& f) {
  if (!(A >= 0.0)) throw ContractViolation("enumerate_prime_indices: A must be >= 0");
  if (A < frame.n1) return;
  const double A2 = A * A;
  std::vector<unsigned char> residues;
  const double X1 = frame.n1 * frame.n1;
  const double covol = std::abs(frame.orientation());
  const auto k2_max = static_cast<std::int64_t>(std::floor(A * frame.n1 / covol * (1.0 + 1e-12))) + 1;
  for (std::int64_t k2 = -k2_max; k2 <= k2_max; ++k2) {
    const Vec2 w = static_cast<double>(k2) * frame.e2;
    const double center = -dot(frame.e1, w) / X1;
    const double c = cross(frame.e1, w);
    const double disc = X1 * A2 - c * c;
    const double half = disc > 0.0 ? std::sqrt(disc) / X1 : 0.0;
    auto inside = [&](std::int64_t k1) { return norm2(combine(k1, frame.e1, k2, frame.e2)) <= A2; };
    std::int64_t lo = 0, hi = -1;
    if (!detail::integer_interval(center - half, center + half, inside, lo, hi)) continue;
    if (lo < 0) lo = 0;
    if (k2 == 0) {
      // gcd(k1, 0) = k1: only (1, 0).
      if (lo > 1 || hi < 1) continue;
      lo = hi = 1;
    } else if (lo == 0) {
      if (k2 == 1) {
        const Vec2 v = frame.e2;
        f(PrimeIndex{0, 1}, v, std::sqrt(norm2(v)));
      }
      lo = 1;
    }
    const std::int64_t m = k2 < 0 ? -k2 : k2;
    if (m > 1) detail::coprime_residues(m, residues);
    std::int64_t r = m > 1 ? lo % m : 0;
    for (std::int64_t k1 = lo; k1 <= hi; ++k1) {
      const bool keep = m <= 1 || residues[static_cast<std::size_t>(r)];
      if (m > 1 && ++r == m) r = 0;
      if (!keep) continue;
      const Vec2 v = combine(k1, frame.e1, k2, frame.e2);
      f(PrimeIndex{k1, k2}, v, std::sqrt(norm2(v)));
    }
  }
}

}  // namespace lattice_lab
