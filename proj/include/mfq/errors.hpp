#pragma once

#include <stdexcept>
#include <string>

namespace mfq {

// Invalid arguments: bad dimensions, non-Hermitian kernels, out-of-range indices.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A truncation budget or memory cap cannot be met with the given resources.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A valid request for a combination this library does not implement.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown (integrator step-size underflow and the like).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mfq
