#pragma once

#include <stdexcept>
#include <string>

namespace ifrci {

// Raised when an operation needs at least one sample positive (N_P >= 1).
class NoPositivesError : public std::domain_error {
 public:
  explicit NoPositivesError(const std::string& what) : std::domain_error(what) {}
};

// Non-convergent searches, empty nuisance ranges, failed internal checks.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ifrci
