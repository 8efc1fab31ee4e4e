#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A patch or wrench failed its construction invariants.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Normal force too small for an operation that divides by it.
class DegenerateNormalForce : public Error {
 public:
  using Error::Error;
};

/// Operation requires a strictly positive friction coefficient.
class ZeroFriction : public Error {
 public:
  using Error::Error;
};

/// No admissible corner forces realize the requested wrench.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// LP kernel or elimination hit a numerically unusable state.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class PointOutsidePatch : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cwc
