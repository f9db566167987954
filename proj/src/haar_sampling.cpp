#include "lattice_lab/haar_sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lattice_lab/rng.hpp"

namespace lattice_lab {

namespace {

constexpr std::uint64_t kHaarTag = 0x48616172ULL;      // "Haar"
constexpr std::uint64_t kWeightTag = 0x57656967ULL;    // "Weig"
constexpr std::uint64_t kAcceptTag = 0x41636370ULL;    // "Accp"

}  // namespace

IwasawaCoords sample_iwasawa(const SamplerConfig& config) {
  CounterRng rng(derive_key({kHaarTag, config.master_seed, config.stream_index}));
  const double y0 = std::sqrt(3.0) / 2.0;
  for (int i = 0; i < kMaxRejectionIterations; ++i) {
    const double x = rng.uniform() - 0.5;
    // Inverse CDF of the density y0 / y^2 on [y0, inf).
    const double y = y0 / rng.uniform_open0();
    if (x * x + y * y >= 1.0) {
      return {x, y, 2.0 * std::numbers::pi * rng.uniform()};
    }
  }
  throw InternalError("sample_haar: rejection loop exceeded its iteration cap");
}

Basis2 basis_from_iwasawa(const IwasawaCoords& c) {
  const double s = std::sqrt(c.y);
  const Mat2 triangular{1.0 / s, c.x / s, 0.0, s};
  return Basis2(Mat2::rotation(c.omega) * triangular);
}

Basis2 sample_haar(const SamplerConfig& config) { return basis_from_iwasawa(sample_iwasawa(config)); }

WeightedDraw sample_weighted_counted(const SamplerConfig& config, const DensitySpec& spec) {
  if (!spec.density) throw ContractViolation("sample_weighted: empty density callback");
  if (!(spec.bound > 0.0) || !std::isfinite(spec.bound)) {
    throw ContractViolation("sample_weighted: bound must be positive and finite");
  }
  const std::uint64_t base = derive_key({kWeightTag, config.master_seed, config.stream_index});
  for (std::uint64_t attempt = 0; attempt < kMaxRejectionIterations; ++attempt) {
    const Basis2 b = sample_haar({base, attempt});
    const double d = spec.density(b);
    if (!(d >= 0.0) || d > spec.bound) {
      throw ContractViolation("sample_weighted: density " + std::to_string(d) + " outside [0, " +
                              std::to_string(spec.bound) + "]");
    }
    CounterRng accept(derive_key({kAcceptTag, base, attempt}));
    if (accept.uniform() * spec.bound < d) return {b, attempt + 1};
  }
  throw InternalError("sample_weighted: rejection loop exceeded its iteration cap");
}

Basis2 sample_weighted(const SamplerConfig& config, const DensitySpec& spec) {
  return sample_weighted_counted(config, spec).basis;
}

}  // namespace lattice_lab
