#pragma once

// Serialization of samples and reports. Reals are written with 17
// significant digits, '.' as decimal separator and LF line endings.

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <ostream>
#include <span>
#include <string>

#include "lattice_lab/disk_counting.hpp"
#include "lattice_lab/experiments.hpp"
#include "lattice_lab/lattice_core.hpp"
#include "lattice_lab/statistics.hpp"

namespace lattice_lab {

enum class Format { csv, json };

/// "csv" or "json"; anything else is a ContractViolation.
Format parse_format(const std::string& name);

/// %.17g formatting.
std::string format_real(double x);

void write_errors_csv(std::ostream& out, std::uint64_t seed, std::span<const ErrorSample> samples);
void write_limit_csv(std::ostream& out, std::uint64_t seed, std::span<const double> samples);
void write_lattices_csv(std::ostream& out, std::uint64_t seed, std::span<const Basis2> lattices);

/// {experiment, params, stats, pass, runtime_seconds}.
nlohmann::ordered_json to_json(const ExperimentReport& report);

/// Runs `body` on a stream for `path` ("-" is stdout); IoError names the path.
void write_text(const std::string& path, const std::function<void(std::ostream&)>& body);

/// Writes to `path`, or to stdout when path is "-". Failures raise IoError
/// naming the path.
void emit(const ExperimentReport& report, const std::string& path, Format format);
/// Samples in index order as the `seed,index,s` CSV or {"seed", "samples"}.
void emit(std::span<const double> samples, std::uint64_t seed, const std::string& path, Format format);
void emit(const EmpiricalDistribution& dist, std::uint64_t seed, const std::string& path, Format format);

}  // namespace lattice_lab
