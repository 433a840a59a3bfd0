#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alphacodec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value lies outside the domain of an operation (sample not in [0,1],
/// NaN input, negative decimal, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text: binary strings, decimal strings, alpha files, CSV, image
/// and audio headers.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A non-wrapping add/sub/mul_small left [0,1).
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Operands of a ring operation do not share a working precision.
class PrecisionMismatch : public Error {
 public:
  using Error::Error;
};

/// A shift or decode would read past the last significant bit.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, std::size_t max_valid)
      : Error(what), max_valid_(max_valid) {}

  /// Largest index (shift count or decode index) that would have succeeded.
  std::size_t max_valid() const noexcept { return max_valid_; }

 private:
  std::size_t max_valid_;
};

/// The requested precision exceeds a configured limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Two sequences that must align (dataset vs. alpha, image dims vs. samples)
/// do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace alphacodec
