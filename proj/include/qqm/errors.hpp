#pragma once

#include <stdexcept>
#include <string>

namespace qqm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids or have incompatible sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// A function set is not linearly independent over the reals.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// An input violated a checked precondition (orthonormality, normalization).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Linear system too ill-conditioned to solve without regularization.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operator expected to be self-adjoint is not.
class ContractViolation : public Error {
 public:
  ContractViolation(const std::string& what, double asymmetry)
      : Error(what), asymmetry_(asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

/// Time integration produced non-finite or exploding values.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double suggested_dt)
      : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Malformed configuration, expression or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qqm
