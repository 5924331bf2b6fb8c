#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molpipe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed SMILES or SMARTS text. offset is the byte position of the
// offending character in the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)),
        offset_(offset) { }

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Arguments outside an operation's domain (non-positive lengths, bad widths,
// molecules an operation refuses).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A shipped or user-supplied data table (rules, groups, keys, templates,
// vocab, config) could not be understood.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class TokenizeError : public Error {
 public:
  using Error::Error;
};

class RecombineError : public Error {
 public:
  using Error::Error;
};

class UnpairedLabelError : public RecombineError {
 public:
  using RecombineError::RecombineError;
};

class AmbiguityError : public RecombineError {
 public:
  using RecombineError::RecombineError;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

// Bad configuration file, environment override or flag value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace molpipe
