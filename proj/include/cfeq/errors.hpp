#pragma once

#include <stdexcept>
#include <string>

namespace cfeq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range input values.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// Too few observations for the requested U-statistic degree.
class InsufficientSampleError : public Error {
 public:
  using Error::Error;
};

/// Samples whose row or column counts do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: margins, levels, grids, kernel parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or series evaluation that failed to reach its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix that is not positive definite.
class LinearAlgebraError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Kernel family/exponent pair that an operation cannot handle.
class UnsupportedKernelError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files and I/O failures.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfeq
