#pragma once

#include <stdexcept>
#include <string>

namespace ssdl {

// Failure categories surfaced by the CLI as distinct exit codes.

/// Invalid experiment configuration or command-line parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input data (parse failures, infeasible splits).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge or produced non-finite output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssdl
