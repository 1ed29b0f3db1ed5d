#pragma once

#include <stdexcept>
#include <string>

namespace qft {

// Invalid or inconsistent user configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during a run (aliasing, non-convergence, missing root).
// CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qft
