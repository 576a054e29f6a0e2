#pragma once

#include <stdexcept>
#include <string>

namespace mbonacci {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A letter outside [0, m) was supplied.
class InvalidLetter : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition (m < 2, a >= m, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A certified computation could not reach a decision within its refinement cap.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, int index = -1) : Error(what), index_(index) {}

  /// Sector / term index the failure refers to, or -1.
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// A witness recipe is malformed (quotient is not a prefix, bad exponent, ...).
class RecipeError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check between two independent routes failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// CLI / run configuration is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbonacci
