#pragma once

#include <stdexcept>
#include <string>

namespace geomctl {

/// Input violates a documented precondition (non-skew matrix, bad gains, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Heading reference is (nearly) parallel to the thrust axis.
class ParallelInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The desired force vector A vanished, so the computed attitude is undefined.
class DegenerateCommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced NaN/Inf.
class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geomctl
