#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hurwitz {

// Base of every error raised by the library. Subclasses carry the names the
// command-line front end reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class NotInFundamentalDomain : public Error {
 public:
  NotInFundamentalDomain() : Error("value is not in the fundamental square F") {}
};

class InadmissibleDigit : public Error {
 public:
  explicit InadmissibleDigit(std::size_t index)
      : Error("digit a_" + std::to_string(index) + " has |a|^2 < 2"), index(index) {}
  std::size_t index;
};

class EvaluationSingularity : public Error {
 public:
  EvaluationSingularity() : Error("continued fraction tail evaluates to 0") {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// Raised when inversion meets a constraint outside the closed family of
// box edges and unit circles. Never swallowed: it would falsify finiteness.
class UnsupportedConstraint : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidDigit : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Internal invariant violation (exit code 3 in the CLI).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hurwitz
