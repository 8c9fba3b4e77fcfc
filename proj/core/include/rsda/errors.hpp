#pragma once

#include <stdexcept>
#include <string>

namespace rsda {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a structural invariant (symmetry, orthonormality, labels).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A trained rule has an all-zero normal vector.
class DegenerateRuleError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A dataset cannot support the requested estimate.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsda
