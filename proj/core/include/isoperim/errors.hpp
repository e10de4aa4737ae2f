#pragma once

#include <stdexcept>
#include <string>

namespace isoperim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (division by an
// interval containing zero, log of a non-positive number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument inside the mathematical domain but outside the range for which a
// certified enclosure is served (e.g. quantiles below 2^-20).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Bisection requested on a degenerate interval or at a non-representable
// midpoint.
class CannotSplitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace isoperim
