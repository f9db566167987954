#include "lattice_lab/lattice_core.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace lattice_lab {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr int kMaxReductionSteps = 100000;

bool all_finite(const Mat2& m) {
  return std::isfinite(m.a11) && std::isfinite(m.a12) && std::isfinite(m.a21) && std::isfinite(m.a22);
}

// Canonical half-plane: first coordinate > 0, or first coordinate 0 and second > 0.
bool is_positive(Vec2 v, double scale) {
  const double tol = kTieTolerance * scale;
  if (v.x > tol) return true;
  return std::abs(v.x) <= tol && v.y > 0.0;
}

bool on_vertical_axis(Vec2 v, double scale) { return std::abs(v.x) <= kTieTolerance * scale; }

struct Candidate {
  Vec2 v;
  double norm;
  std::int64_t a;  // coefficient on the reduced u
  std::int64_t b;  // coefficient on the reduced v
};

// Canonical preference among equal-norm candidates: strictly positive first
// coordinate beats the vertical tie-break, then lexicographic (x, y).
bool preferred(const Candidate& p, const Candidate& q, double scale) {
  const bool pv = on_vertical_axis(p.v, scale), qv = on_vertical_axis(q.v, scale);
  if (pv != qv) return !pv;
  const double tol = kTieTolerance * scale;
  if (std::abs(p.v.x - q.v.x) > tol) return p.v.x < q.v.x;
  return p.v.y < q.v.y;
}

}  // namespace

Basis2::Basis2(const Mat2& m) : m_(m) {
  if (!all_finite(m)) throw ContractViolation("Basis2: non-finite entry");
  const double d = m.det();
  if (!(std::abs(d - 1.0) <= kDetTolerance)) {
    throw ContractViolation("Basis2: determinant " + std::to_string(d) + " is not 1 (unimodularity)");
  }
}

PrimeIndex PrimeIndex::make(std::int64_t k1, std::int64_t k2) {
  if (!is_canonical_prime_index(k1, k2)) {
    throw ContractViolation("PrimeIndex: (" + std::to_string(k1) + "," + std::to_string(k2) +
                            ") is not a canonical coprime index");
  }
  return PrimeIndex{k1, k2};
}

bool is_prime_vector(std::int64_t k1, std::int64_t k2) {
  if (k1 == 0 && k2 == 0) throw ContractViolation("is_prime_vector: zero vector");
  return detail::coprime(k1, k2);
}

bool is_canonical_prime_index(std::int64_t k1, std::int64_t k2) {
  if (k1 < 0) return false;
  if (k1 == 0) return k2 == 1;
  return detail::coprime(k1, k2);
}

namespace detail {

ReducedFrame reduce_unchecked(const Mat2& basis) {
  if (!all_finite(basis)) throw ContractViolation("gauss_reduce: non-finite entry");
  if (basis.det() == 0.0) throw ContractViolation("gauss_reduce: degenerate basis");

  Vec2 u = basis.col1(), v = basis.col2();
  IntMat2 cu{1, 0, 0, 1};  // columns: coefficients of u and v in the input basis
  if (norm2(v) < norm2(u)) {
    std::swap(u, v);
    cu = {0, 1, 1, 0};
  }
  for (int step = 0;; ++step) {
    if (step > kMaxReductionSteps) throw InternalError("gauss_reduce: reduction did not terminate");
    const double mu = dot(u, v) / norm2(u);
    const double q = std::nearbyint(mu);
    if (std::abs(q) > 9.0e15) throw OverflowError("gauss_reduce: reduction coefficient out of range");
    if (q != 0.0) {
      const auto qi = static_cast<std::int64_t>(q);
      v = v - q * u;
      cu.a12 -= qi * cu.a11;
      cu.a22 -= qi * cu.a21;
    }
    if (norm2(v) < norm2(u)) {
      std::swap(u, v);
      std::swap(cu.a11, cu.a12);
      std::swap(cu.a21, cu.a22);
    } else {
      break;
    }
  }

  // All first and second minima of a reduced pair lie among small combinations.
  std::vector<Candidate> cands;
  const double scale = std::sqrt(norm2(v));
  for (std::int64_t a = -2; a <= 2; ++a) {
    for (std::int64_t b = -2; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      const Vec2 w = combine(a, u, b, v);
      if (!is_positive(w, scale)) continue;
      cands.push_back({w, std::sqrt(norm2(w)), a, b});
    }
  }

  auto pick = [&](auto&& admissible, bool& tied) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands)
      if (admissible(c)) best = std::min(best, c.norm);
    const Candidate* choice = nullptr;
    int count = 0;
    for (const auto& c : cands) {
      if (!admissible(c) || c.norm > best * (1.0 + kTieTolerance)) continue;
      ++count;
      if (choice == nullptr || preferred(c, *choice, scale)) choice = &c;
    }
    tied = count > 1;
    return *choice;
  };

  bool tie1 = false, tie2 = false;
  const Candidate first = pick([](const Candidate&) { return true; }, tie1);
  const double covol = std::abs(cross(u, v));
  const Candidate second = pick(
      [&](const Candidate& c) { return std::abs(cross(first.v, c.v)) > 0.5 * covol; }, tie2);

  ReducedFrame f;
  f.e1 = first.v;
  f.e2 = second.v;
  f.n1 = first.norm;
  f.n2 = second.norm;
  f.tie_broken = tie1 || tie2 || on_vertical_axis(f.e1, scale) || on_vertical_axis(f.e2, scale);
  // Express e1, e2 through the input basis: e = a*u + b*v with u, v from cu.
  f.coefficients.a11 = first.a * cu.a11 + first.b * cu.a12;
  f.coefficients.a21 = first.a * cu.a21 + first.b * cu.a22;
  f.coefficients.a12 = second.a * cu.a11 + second.b * cu.a12;
  f.coefficients.a22 = second.a * cu.a21 + second.b * cu.a22;
  return f;
}

}  // namespace detail

ReducedFrame gauss_reduce(const Basis2& basis) { return detail::reduce_unchecked(basis.matrix()); }

Basis2 dual(const Basis2& basis) { return Basis2(basis.matrix().inverse_transpose()); }

std::vector<PrimeVector> enumerate_prime_indices(const ReducedFrame& frame, double A) {
  std::vector<PrimeVector> out;
  for_each_prime_index(frame, A, [&](PrimeIndex k, Vec2, double n) { out.push_back({k, n}); });
  std::sort(out.begin(), out.end(), [](const PrimeVector& p, const PrimeVector& q) {
    if (p.norm != q.norm) return p.norm < q.norm;
    return p.k < q.k;
  });
  return out;
}

ShapeCoords shape_coords(const ReducedFrame& frame) {
  ShapeCoords s;
  s.X1 = norm2(frame.e1);
  s.X2 = dot(frame.e1, frame.e2);
  s.X3 = norm2(frame.e2);
  s.sign_beta = frame.orientation() >= 0.0 ? 1 : -1;
  if (frame.e1.y == 0.0) {
    s.degenerate_axis = true;
    s.X4 = std::numeric_limits<double>::infinity();
  } else {
    s.X4 = frame.e1.x / frame.e1.y;
  }
  return s;
}

double a_k(std::int64_t k1, std::int64_t k2, double X1, double X2) {
  const auto a = static_cast<double>(k1), b = static_cast<double>(k2);
  return a * a * X1 * X1 + 2.0 * a * b * X1 * X2 + b * b * (1.0 + X2 * X2);
}

double e1_axis_contrast(const ShapeCoords& s) {
  const double q = s.X4 * s.X4;
  return s.X1 * (q - 1.0) / (q + 1.0);
}

double e2_axis_contrast(const ShapeCoords& s) {
  const double q = s.X4 * s.X4;
  return ((q - 1.0) * (s.X2 * s.X2 - 1.0) - 4.0 * s.sign_beta * s.X2 * s.X4) / (s.X1 * (1.0 + q));
}

double first_minimum(const Basis2& basis) { return gauss_reduce(basis).n1; }
double second_minimum(const Basis2& basis) { return gauss_reduce(basis).n2; }

}  // namespace lattice_lab
