#pragma once

// Small fixed-size 2D linear algebra used throughout the library.

#include <array>
#include <cmath>
#include <cstdint>

namespace lattice_lab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return dot(a, a); }

/// Integer combination k1*e1 + k2*e2.
constexpr Vec2 combine(std::int64_t k1, Vec2 e1, std::int64_t k2, Vec2 e2) {
  return {static_cast<double>(k1) * e1.x + static_cast<double>(k2) * e2.x,
          static_cast<double>(k1) * e1.y + static_cast<double>(k2) * e2.y};
}

/// Row-major 2x2 real matrix; entry aij sits in row i, column j.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.x, c2.x, c1.y, c2.y}; }
  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 rotation(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c, -s, s, c};
  }

  constexpr Vec2 col1() const { return {a11, a21}; }
  constexpr Vec2 col2() const { return {a12, a22}; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
  constexpr Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  constexpr Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  constexpr Mat2 scaled(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
  /// Inverse transpose; the matrix of the dual lattice.
  constexpr Mat2 inverse_transpose() const {
    const double d = det();
    return {a22 / d, -a21 / d, -a12 / d, a11 / d};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Integer 2x2 matrix (change of lattice basis).
struct IntMat2 {
  std::int64_t a11 = 1, a12 = 0;
  std::int64_t a21 = 0, a22 = 1;

  constexpr std::int64_t det() const { return a11 * a22 - a12 * a21; }
  friend constexpr bool operator==(const IntMat2&, const IntMat2&) = default;
};

}  // namespace lattice_lab
