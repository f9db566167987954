#pragma once

// The oscillatory objects of the lattice counting error: the phase function
//
//   phi(theta) = sum_{m >= 1} cos(2 pi m theta - 3 pi / 4) / m^{3/2},
//
// the phases theta_k = t |k1 e1 + k2 e2| mod 1, the truncated Fourier sums
// H_A and S_{A,prime}, the flow derivatives W_k, and the geometry of the
// ellipses D S^1.

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lattice_lab/lattice_core.hpp"

namespace lattice_lab {

/// |v|^{-3/2}; the single expression every weighted sum uses.
inline double inv_pow_three_halves(double r) { return 1.0 / (r * std::sqrt(r)); }

/// fractional part in [0, 1).
double wrap_unit(double x);

/// Evaluates phi through the branch-point expansion of Li_{3/2}(e^{2 pi i theta})
/// around theta = 0:
///
///   phi = Re[e^{-3 pi i/4} (Gamma(-1/2) (-mu)^{1/2} + sum_k zeta(3/2 - k) mu^k / k!)],
///   mu = 2 pi i theta~,  theta~ in (-1/2, 1/2].
///
/// The power series converges geometrically (ratio |theta~| <= 1/2), so a
/// fixed table of zeta(3/2 - k) gives uniform accuracy.
class PhiEvaluator {
 public:
  explicit PhiEvaluator(double target_abs_error = 1e-10);

  double operator()(double theta) const;

  /// Non-analytic part at theta~ = 0: 2 sqrt(pi) sqrt(2 pi theta~) for theta~ > 0, else 0.
  static double singular_part(double centered);
  /// Analytic remainder, a real power series in theta~.
  double regular_part(double centered) const;

  double target_abs_error() const { return target_; }
  std::span<const double> zeta_table() const { return zeta_; }
  int terms() const { return static_cast<int>(coeff_.size()); }

 private:
  double target_;
  std::vector<double> zeta_;   // zeta(3/2 - k), k = 0..K
  std::vector<double> coeff_;  // real Taylor coefficients of regular_part
};

/// Dense table of phi(u) - 2 pi sqrt(2u) on [0, 1], a smooth function, with
/// 4-point cubic interpolation; the square-root term is added exactly. For
/// bulk Monte Carlo use.
class PhiGrid {
 public:
  /// Resolution used by the samplers: 512 KiB, small enough to stay cache resident.
  static constexpr std::size_t kBulkCells = std::size_t{1} << 16;

  PhiGrid(const PhiEvaluator& ev, std::size_t cells = std::size_t{1} << 20);

  double operator()(double theta) const;
  std::size_t cells() const { return cells_; }

 private:
  std::size_t cells_;
  double inv_h_;
  std::vector<double> table_;  // phi(u) - 2 pi sqrt(2 u) at u = i / cells, i = 0..cells
};

/// phi(theta) for theta in [0, 1) (other values are wrapped).
double phi(double theta, const PhiEvaluator& ev);

/// t |k1 e1 + k2 e2| mod 1.
double theta_k(const ReducedFrame& frame, PrimeIndex k, double t);

/// H_A = (1/pi) sum over nonzero lattice vectors l with |l| <= A of
/// cos(2 pi t |l| - 3 pi/4) / |l|^{3/2}, for the lattice spanned by `basis`.
double h_sum(const Basis2& basis, double t, double A);

/// S_{A,prime} = (2/pi) sum_{k in Pi_A} phi(theta_k) / |v_k|^{3/2}.
double s_a_prime(const ReducedFrame& frame, double t, double A, const PhiEvaluator& ev);
double s_a_prime(const ReducedFrame& frame, double t, double A, const PhiGrid& grid);

/// d/dh at h = 0 of |k1 e1(delta(1+h) L) + k2 e2(delta(1+h) L)|, delta = diag(l, 1/l):
/// ((v)_1^2 - (v)_2^2) / |v| for v = k1 e1 + k2 e2.
double w_coefficient(const ReducedFrame& frame, PrimeIndex k);

using WitnessTerm = std::pair<std::int64_t, PrimeIndex>;

/// |sum_i p_i W_{k_i}|; the k_i must be distinct and not every p_i zero.
double z_free_witness(const ReducedFrame& frame, std::span<const WitnessTerm> terms);

struct OvalGeometry {
  Vec2 x_gamma{};           // point of D S^1 with outward normal xi / |xi|
  double rho_gamma = 0.0;   // curvature radius there
  double Y_gamma = 0.0;     // <xi, x_gamma>
};

OvalGeometry oval_geometry(const Mat2& D, Vec2 xi);

namespace detail {
double z_free_witness_unchecked(const ReducedFrame& frame, std::span<const WitnessTerm> terms);
}

}  // namespace lattice_lab
