#pragma once

#include <stdexcept>
#include <string>

namespace enzybench {

// Base for all toolkit errors so callers can catch one type at the CLI edge.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string &reason)
      : Error("SMILES parse error at position " + std::to_string(position) +
              ": " + reason),
        position_(position), reason_(reason) {}

  std::size_t position() const { return position_; }
  const std::string &reason() const { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownDigit : public Error {
 public:
  using Error::Error;
};

}  // namespace enzybench
