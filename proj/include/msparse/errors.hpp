#pragma once

#include <stdexcept>
#include <string>

namespace msparse {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the range an operation accepts.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A quantity is undefined at the requested argument (zero denominators,
/// vanishing sup norms, inadmissible exponent combinations).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InadmissiblePairError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A balance equation has no admissible root.
class UnsolvableBalanceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  enum class Kind { Io, MalformedHeader, SizeMismatch, NonFinite };

  LoadError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Criterion evaluation windows that contain too few snapshots.
class SchedulingError : public Error {
 public:
  using Error::Error;
};

/// The time stepper produced non-finite values.
class InstabilityError : public Error {
 public:
  InstabilityError(double last_good_time, const std::string& what)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace msparse
