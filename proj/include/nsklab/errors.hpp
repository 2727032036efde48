#pragma once

#include <stdexcept>
#include <string>

namespace nsklab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };

// Raised by the solver when a law with a negative exponent is evaluated on a
// floored cell.
struct VacuumError : Error {
  VacuumError(const std::string& what, int cell)
      : Error(what + " (cell " + std::to_string(cell) + ")"), cell(cell) {}
  int cell;
};

}  // namespace nsklab
