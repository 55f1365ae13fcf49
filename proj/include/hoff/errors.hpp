#pragma once

#include <stdexcept>
#include <string>

namespace hoff {

// Root of every error thrown by the library. The CLI maps the subclasses
// below onto distinct exit statuses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical hypothesis of the requested operation does not hold:
// bias or correlation below the stated constant, p <= k, and so on.
class HypothesisFailure : public Error {
 public:
  using Error::Error;
};

// The operation would enumerate more points than the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed input: shape or modulus mismatch, dependent bases, bad JSON.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Unreadable input document; the message carries the position.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hoff
