#pragma once

// Reproducible sampling of unimodular lattices from the Haar probability
// measure on SL2(R)/SL2(Z), and from bounded densities against it.
//
// A lattice is written R(omega) N(x) D(y) Z^2 (Iwasawa coordinates) with
// omega uniform on [0, 2 pi) and (x, y) in the modular fundamental domain
// {|x| <= 1/2, x^2 + y^2 >= 1} with density (3/pi) dx dy / y^2.

#include <cstdint>
#include <functional>

#include "lattice_lab/lattice_core.hpp"

namespace lattice_lab {

struct SamplerConfig {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

struct IwasawaCoords {
  double x = 0.0;
  double y = 1.0;
  double omega = 0.0;
};

struct DensitySpec {
  std::function<double(const Basis2&)> density;
  double bound = 1.0;
};

struct WeightedDraw {
  Basis2 basis;
  std::uint64_t attempts = 0;  // Haar proposals consumed, including the accepted one
};

inline constexpr int kMaxRejectionIterations = 1'000'000;

IwasawaCoords sample_iwasawa(const SamplerConfig& config);
Basis2 basis_from_iwasawa(const IwasawaCoords& c);

/// Haar-distributed unimodular basis; a pure function of config.
Basis2 sample_haar(const SamplerConfig& config);

/// Rejection sampling from density * dmu2 (normalized).
Basis2 sample_weighted(const SamplerConfig& config, const DensitySpec& spec);
WeightedDraw sample_weighted_counted(const SamplerConfig& config, const DensitySpec& spec);

}  // namespace lattice_lab
