#pragma once

#include <stdexcept>
#include <string>

namespace defocus {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computed quantity leaves its meaningful range
/// (e.g. a depth beyond the configured cap near the pole of the depth map).
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Numerical failure: adaptive quadrature exhausted its node budget.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File or stream failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Table header or field that does not match the expected schema.
class SchemaError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace defocus
