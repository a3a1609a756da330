#pragma once

#include <stdexcept>
#include <string>

namespace entbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix failed Hermiticity; carries the observed asymmetry.
class NotHermitian : public Error {
 public:
  NotHermitian(double asymmetry, double tolerance);
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

class NotSquare : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class NotDiagonal : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(long expected, long actual);
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix is Hermitian but not a valid density matrix (negative spectrum or bad trace).
class NotDensityMatrix : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class TooFewObservables : public Error {
 public:
  using Error::Error;
};

class InvalidRank : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

/// Numerical self-consistency check failed (e.g. large imaginary part of a real trace).
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

/// Malformed file or configuration; message carries file and field location.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace entbound
