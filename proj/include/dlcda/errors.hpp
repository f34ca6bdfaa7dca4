#pragma once

#include <stdexcept>
#include <string>

namespace dlcda {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class SingularPencil : public Error {
 public:
  using Error::Error;
};

class WidthTooSmall : public Error {
 public:
  using Error::Error;
};

class LabelOutOfRange : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ClassMissingInSource : public Error {
 public:
  using Error::Error;
};

/// Problems with input files (parsing, counts, non-finite values, I/O).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, std::size_t byte_offset,
             const std::string& message)
      : DataError(path + ":" + std::to_string(line) + ": " + message +
                  " (byte " + std::to_string(byte_offset) + ")"),
        line_(line),
        byte_offset_(byte_offset) {}

  std::size_t line() const { return line_; }
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t line_;
  std::size_t byte_offset_;
};

class LabelCountMismatch : public DataError {
 public:
  using DataError::DataError;
};

class NonFiniteValue : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// Invalid experiment configuration (bad flags, malformed config JSON).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlcda
