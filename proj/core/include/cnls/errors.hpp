#pragma once

#include <stdexcept>
#include <string>

namespace cnls {

/// Shape or size mismatch between arguments (wrong cell count, bad index, ...).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (zero mass, negative values, ...).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed: non-finite values, quadrature or
/// bracketing that did not converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cnls
