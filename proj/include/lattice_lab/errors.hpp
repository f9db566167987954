#pragma once

#include <stdexcept>
#include <string>

namespace lattice_lab {

/// A documented precondition or type invariant was violated by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation would leave the representable range (e.g. counts past int64).
class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

/// Internal failure that signals misuse of the library (e.g. a runaway rejection loop).
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

/// File or stream failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lattice_lab
