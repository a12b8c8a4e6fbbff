#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

/// Argument outside the mathematical domain of an operation (zero vector, n < 4, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector or matrix sizes that do not agree with each other.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A spectrum whose Dynkin-type data is not integral.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant evaluation that hit an internal consistency check
/// (complex trace with a large imaginary part, negative determinant, ...).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed run configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

void require_size(long actual, long expected, const char* what);

}  // namespace birkhoff
