#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perturba {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (non-finite entries, bad indices, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NonHermitianInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A correction sum met a vanishing energy gap across a nonzero coupling.
class DegenerateDenominator : public Error {
 public:
  DegenerateDenominator(std::size_t level, std::size_t partner)
      : Error("degenerate denominator between levels " + std::to_string(level) + " and " +
              std::to_string(partner)),
        level_(level),
        partner_(partner) {}

  std::size_t level() const noexcept { return level_; }
  std::size_t partner() const noexcept { return partner_; }

 private:
  std::size_t level_;
  std::size_t partner_;
};

/// A quantity that must be real by Hermiticity came out with a sizeable imaginary part.
class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace perturba
