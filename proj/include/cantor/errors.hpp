#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A word is deeper than an explicit-tree backing can realize.
class DepthUnavailable : public Error {
 public:
  using Error::Error;
};

/// Dissection ratio requested for the empty word.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

/// All fixed points coincide, so the attractor is a single point.
class DegenerateAttractor : public Error {
 public:
  using Error::Error;
};

/// Two sets that must be strictly separated overlap or touch.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// An input construction does not carry the required ratio bound.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// Interval-count cap exceeded. Carries a human-readable summary of the partial result.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t partial_count)
      : Error(what), partial_count_(partial_count) {}
  std::size_t partial_count() const noexcept { return partial_count_; }

 private:
  std::size_t partial_count_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Grid operations on sets with different steps or origins.
class ResolutionMismatch : public Error {
 public:
  using Error::Error;
};

/// Hausdorff distance requested with an empty operand.
class UndefinedDistance : public Error {
 public:
  using Error::Error;
};

/// Bad user input: map metadata, spec documents, preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A checked internal invariant failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cantor
