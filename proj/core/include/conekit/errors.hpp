#pragma once

#include <stdexcept>
#include <string>

namespace conekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or bipartite factorizations do not agree.
class DimError : public Error {
 public:
  using Error::Error;
};

/// A decomposition was requested for the zero vector or zero operator.
class ZeroInputError : public Error {
 public:
  using Error::Error;
};

/// A vector that must have unit norm does not.
class NormError : public Error {
 public:
  using Error::Error;
};

/// Input is not Hermitian, even after absorbing round-off.
class HermiticityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A random draw stayed numerically singular after all resampling attempts.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// Not enough (or unsuitable) product anchor vectors for an identity completion.
class AnchorError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input (JSON structure, non-finite entries, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace conekit
