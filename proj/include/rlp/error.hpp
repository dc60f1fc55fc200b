#pragma once

#include <stdexcept>
#include <string>

namespace rlp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A library invariant was found violated at run time (e.g. a rejection
/// ratio above one).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A level was never exceeded within the simulated horizon.
class NotReached : public Error {
 public:
  NotReached(const std::string& what, double max_seen)
      : Error(what), max_seen_(max_seen) {}
  double max_seen() const noexcept { return max_seen_; }

 private:
  double max_seen_;
};

/// A per-draw simulation budget ran out.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An importance-weighted ensemble lost too much effective sample size.
class DegenerateEnsemble : public Error {
 public:
  DegenerateEnsemble(const std::string& what, double ess)
      : Error(what), ess_(ess) {}
  double ess() const noexcept { return ess_; }

 private:
  double ess_;
};

/// A truncation box does not capture enough probability mass.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double captured)
      : Error(what), captured_(captured) {}
  double captured() const noexcept { return captured_; }

 private:
  double captured_;
};

/// A level shift would leave the window with less back depth than requested.
class TruncatedShift : public Error {
 public:
  TruncatedShift(const std::string& what, long feasible_depth)
      : Error(what), feasible_depth_(feasible_depth) {}
  long feasible_depth() const noexcept { return feasible_depth_; }

 private:
  long feasible_depth_;
};

}  // namespace rlp
