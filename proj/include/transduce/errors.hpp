#pragma once

#include <stdexcept>
#include <string>

namespace transduce {

// Contract violations raised by the learning pipeline. Execution failures on
// a well-formed rule are not exceptions; see engine.hpp.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputTooShort : public Error {
 public:
  explicit InputTooShort(std::size_t len)
      : Error("input must hold at least two tokens, got " + std::to_string(len)) {}
};

class MalformedClause : public Error {
 public:
  using Error::Error;
};

class InvalidEncoding : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NoCompression : public Error {
 public:
  NoCompression() : Error("no repetition found; nothing to generalize") {}
};

class EmptyIntersection : public Error {
 public:
  EmptyIntersection() : Error("no candidate is consistent with every example") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace transduce
