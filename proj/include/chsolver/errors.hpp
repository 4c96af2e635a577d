#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when user supplied parameters break a documented invariant.
/// The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ImaginaryResidue : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SingularKernel : public Error {
 public:
  using Error::Error;
};

class MeshViolatesA1 : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonfiniteField : public Error {
 public:
  using Error::Error;
};

class MeshExhausted : public Error {
 public:
  using Error::Error;
};

class DimMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateRatio : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace chs
