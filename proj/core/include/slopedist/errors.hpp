#pragma once

#include <stdexcept>
#include <string>

namespace slopedist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is malformed or violates a documented invariant.
/// The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class MissingKey : public ValidationError {
 public:
  explicit MissingKey(const std::string& key)
      : ValidationError("missing key: " + key), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class InvariantViolation : public ValidationError {
 public:
  explicit InvariantViolation(const std::string& what)
      : ValidationError("invariant violated: " + what), description_(what) {}
  const std::string& description() const noexcept { return description_; }

 private:
  std::string description_;
};

class NotARotation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonUnitInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateGeometry : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfOrderFrame : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidScenario : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TargetBehindCamera : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyInput : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class JoinMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parse errors carry the offending file and line.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File could not be opened, read or written. Exit code 2 in the CLI.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace slopedist
