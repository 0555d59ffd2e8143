#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abcd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A reordered or augmented matrix does not have the block pattern it should.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// The q x q matrix S = Y(I - P)Y^T could not be factorized.
class SingularSchur : public Error {
 public:
  SingularSchur(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// A dense oracle was asked to handle more entries than its cap allows.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace abcd
