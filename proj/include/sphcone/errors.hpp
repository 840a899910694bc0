#pragma once

#include <stdexcept>
#include <string>

namespace sphcone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A triangle (or a metric built from triangles) violates an invariant.
class ValidityError : public Error {
 public:
  ValidityError(std::string what, int triangle = -1)
      : Error(std::move(what)), triangle_(triangle) {}

  /// Index (0-based, T1..T4 -> 0..3) of the offending triangle, or -1.
  int triangle() const { return triangle_; }

 private:
  int triangle_;
};

/// The data are consistent numbers but no spherical triangle realizes them.
class NoTriangleError : public Error {
 public:
  using Error::Error;
};

/// An intermediate quantity left its mathematically possible range by more
/// than the rounding allowance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InconsistentDataError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Malformed document. `where()` names the field or byte offset.
class ParseError : public Error {
 public:
  ParseError(std::string what, std::string where)
      : Error(what + " (at " + where + ")"), where_(std::move(where)) {}

  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sphcone
