#include "lattice_lab/report.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lattice_lab/errors.hpp"

namespace lattice_lab {

void write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("write failed: <stdout>");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  body(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ContractViolation("unknown format '" + name + "' (expected csv or json)");
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_errors_csv(std::ostream& out, std::uint64_t seed, std::span<const ErrorSample> samples) {
  out << "seed,index,t,count,error,normalized\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ErrorSample& e = samples[i];
    out << seed << ',' << i << ',' << format_real(e.t) << ',' << e.count << ',' << format_real(e.error) << ','
        << format_real(e.normalized) << '\n';
  }
}

void write_limit_csv(std::ostream& out, std::uint64_t seed, std::span<const double> samples) {
  out << "seed,index,s\n";
  for (std::size_t i = 0; i < samples.size(); ++i) out << seed << ',' << i << ',' << format_real(samples[i]) << '\n';
}

void write_lattices_csv(std::ostream& out, std::uint64_t seed, std::span<const Basis2> lattices) {
  out << "seed,index,b11,b12,b21,b22\n";
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const Basis2& b = lattices[i];
    out << seed << ',' << i << ',' << format_real(b.b11()) << ',' << format_real(b.b12()) << ','
        << format_real(b.b21()) << ',' << format_real(b.b22()) << '\n';
  }
}

nlohmann::ordered_json to_json(const ExperimentReport& report) {
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.stats) stats[k] = v;
  nlohmann::ordered_json pass = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.pass) pass[k] = v;
  return {{"experiment", report.experiment},
          {"params", report.params},
          {"stats", stats},
          {"pass", pass},
          {"runtime_seconds", report.runtime_seconds}};
}

void emit(const ExperimentReport& report, const std::string& path, Format format) {
  write_text(path, [&](std::ostream& out) {
    if (format == Format::json) {
      out << to_json(report).dump(2) << '\n';
      return;
    }
    out << "kind,name,value\n";
    for (const auto& [k, v] : report.stats) out << "stat," << k << ',' << format_real(v) << '\n';
    for (const auto& [k, v] : report.pass) out << "pass," << k << ',' << (v ? "true" : "false") << '\n';
  });
}

void emit(std::span<const double> samples, std::uint64_t seed, const std::string& path, Format format) {
  if (samples.empty()) throw ContractViolation("emit: empty distribution");
  write_text(path, [&](std::ostream& out) {
    if (format == Format::csv) {
      write_limit_csv(out, seed, samples);
      return;
    }
    nlohmann::ordered_json j = {{"seed", seed}, {"samples", std::vector<double>(samples.begin(), samples.end())}};
    out << j.dump() << '\n';
  });
}

void emit(const EmpiricalDistribution& dist, std::uint64_t seed, const std::string& path, Format format) {
  emit(dist.samples(), seed, path, format);
}

}  // namespace lattice_lab
