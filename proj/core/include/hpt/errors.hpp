#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hpt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression, rational literal or JSON document.
/// `offset()` is the byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Malformed space description (unknown names, duplicate basis, missing unit).
class SpecError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

class InversionError : public Error {
 public:
  using Error::Error;
};

class SpaceMismatchError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a moment or cumulant is requested for a collection that is
/// not an L-infinity morphism.
class MorphismError : public Error {
 public:
  using Error::Error;
};

}  // namespace hpt
