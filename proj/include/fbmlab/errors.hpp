#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbmlab {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the documented domain (bad Hurst value, index range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a configured resource cap (dense method size, n guard).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Circulant embedding stayed indefinite after exhausting the retry budget.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

// Dense factorization or eigensolve failed.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

// Euler recursion produced a non-finite state; step_index() is the first bad node.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, std::size_t step_index)
      : Error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

// Zero denominator in the dyadic ratio; the path is degenerate, not gated out.
class DegeneratePathError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or command-line input; maps to the usage exit code.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File open/read/write failure; maps to the I/O exit code.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fbmlab
