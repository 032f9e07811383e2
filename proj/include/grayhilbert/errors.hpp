#pragma once

#include <stdexcept>
#include <string>

namespace grayhilbert {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of an operation (index too large,
// coordinate outside the unit cube, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

// A precondition on the shape of the inputs was violated (dimension
// mismatch, non-corner entry point, s >= |S|, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Malformed or missing input data.
class DataError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace grayhilbert
