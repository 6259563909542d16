#pragma once

#include <stdexcept>
#include <string>

namespace symcone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands come from incompatible scalar types or algebras.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Point lies outside the open cone where a cone-interior quantity was requested.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Singular or ill-conditioned metric, chart, or jet evaluation.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Requested construction is not available for this family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace symcone
