#pragma once

#include <stdexcept>
#include <string>

namespace pdcs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operand sizes disagree (qubit counts, matrix dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap was exceeded (dense realization, exhaustive enumeration).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-unitary target, invalid state, bad config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Internal structural invariant broken by the caller (e.g. non-commuting rotor members).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace pdcs
