#pragma once

#include <stdexcept>
#include <string>

namespace hullscope {

/// Base class for every error raised by the library. Callers that only need
/// to distinguish "library rejected the input or computation" from other
/// failures can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input files (CSV, HSM1, JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Arguments violating an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hullscope
