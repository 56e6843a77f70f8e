#pragma once

#include <stdexcept>
#include <string>

namespace aluthge {

/// Raised when an operand or parameter violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A computed quantity left the range of double precision (inf or NaN).
/// Catalog checks turn this into a skipped report rather than a failure.
class NonFiniteValue : public InvalidInput {
 public:
  explicit NonFiniteValue(const std::string& what) : InvalidInput(what) {}
};

/// Operands or parameters do not meet a statement's hypotheses (missing
/// role, non-positive input, non-monotone pair). check_all turns this into a
/// skip marker.
class ConstraintViolation : public InvalidInput {
 public:
  explicit ConstraintViolation(const std::string& what) : InvalidInput(what) {}
};

}  // namespace aluthge
