#pragma once

#include <stdexcept>
#include <string>

namespace hermes {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range serialized data.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic misuse such as inverting zero.
class MathError : public Error {
 public:
  using Error::Error;
};

/// Misuse of an API: wrong lengths, finalized builders, bad parameters.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A witness that does not satisfy its constraint system.
class InvalidWitness : public Error {
 public:
  using Error::Error;
};

}  // namespace hermes
