#pragma once

#include <stdexcept>
#include <string>

namespace tsmc {

/// Invalid or inconsistent user-facing configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure inside an optimizer (CLI exit code 3).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsmc
