#pragma once

#include <stdexcept>
#include <string>

namespace ringburst {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A field's support is clipped by the grid it lives on.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The grid does not resolve the concentration scale.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An expansion branch was requested outside its region of validity.
class RegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File or configuration problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough rows to fit a tail.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringburst
