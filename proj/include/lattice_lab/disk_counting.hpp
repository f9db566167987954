#pragma once

// Exact lattice point counts in dilated disks, the counting error
// R = N - pi t^2 and its normalization R / sqrt(t), and the reduction of a
// centred ellipse to the unit disk.

#include <cstdint>

#include "lattice_lab/lattice_core.hpp"

namespace lattice_lab {

struct ErrorSample {
  double t = 0.0;
  std::int64_t count = 0;
  double error = 0.0;       // count - pi t^2
  double normalized = 0.0;  // error / sqrt(t)
  Vec2 center{};
};

/// Positive-definite quadratic form q(v) = q11 x^2 + 2 q12 x y + q22 y^2; the
/// ellipse is {q(v) <= 1}.
struct EllipseForm {
  double q11 = 1.0;
  double q12 = 0.0;
  double q22 = 1.0;

  bool contains(Vec2 v, double t) const { return q11 * v.x * v.x + 2.0 * q12 * v.x * v.y + q22 * v.y * v.y <= t * t; }
  double area() const;
};

struct DiskReduction {
  Mat2 transform;  // det 1
  double scale = 1.0;
};

/// #{n in Z^2 : |basis n - center| <= t}.
std::int64_t count_points(const Basis2& basis, double t, Vec2 center = {});

ErrorSample error_sample(const Basis2& basis, double t);

/// v in t*E  <=>  |transform v| <= t * scale.
DiskReduction ellipse_to_disk(const EllipseForm& ell);

namespace detail {

/// Same count for an arbitrary nonsingular basis (no unimodularity check).
std::int64_t count_points_unchecked(const Mat2& basis, double t, Vec2 center);

/// Sign of |basis n - center|^2 - t^2 evaluated in double-double arithmetic.
int boundary_sign(const Mat2& basis, std::int64_t n1, std::int64_t n2, Vec2 center, double t);

}  // namespace detail

}  // namespace lattice_lab
