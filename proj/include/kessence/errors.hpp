#pragma once

#include <stdexcept>
#include <string>

namespace kessence {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Guards and integration failures. The CLI maps these to exit code 3.
class NumericError : public Error {
public:
  using Error::Error;
};

// A rational expression hit (or came within tol_den of) one of its poles.
class DegenerateDenominator : public NumericError {
public:
  using NumericError::NumericError;
};

// An argument lies outside the domain where a formula is defined.
class DomainError : public NumericError {
public:
  using NumericError::NumericError;
};

// Sampling grid with x_min >= x_max or fewer than two points.
class InvalidGrid : public Error {
public:
  using Error::Error;
};

// Grid spacing too wide to resolve a wall of thickness 1/b.
class GridTooCoarse : public NumericError {
public:
  using NumericError::NumericError;
};

// The coefficient of the field acceleration vanished.
class SingularMassMatrix : public NumericError {
public:
  using NumericError::NumericError;
};

class StepFailure : public NumericError {
public:
  using NumericError::NumericError;
};

class FitDomain : public NumericError {
public:
  using NumericError::NumericError;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace kessence
