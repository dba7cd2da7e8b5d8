#pragma once

#include <stdexcept>
#include <string>

namespace gdsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on height, width or channel count.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar or configuration value does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An iterative or linear solve did not produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace gdsr
