#pragma once

#include <stdexcept>
#include <string>

namespace smoothrmf {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the domain of the operation (n = 0, sigma <= 0, u < 0 ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input outside the range a table or strategy can serve.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A configured memory or enumeration cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A root finder could not bracket or converge.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothrmf
