#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmatch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An instance that fails validate_instance was handed to a solver or parser.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An augmenting search ran out of frontier vertices outside its tree.
class ExhaustedFrontier : public Error {
 public:
  using Error::Error;
};

// Predecessor links of an alternating tree do not lead back to the root.
class BrokenTree : public Error {
 public:
  using Error::Error;
};

class InconsistentMatching : public Error {
 public:
  using Error::Error;
};

// Raised by checked solves when a dual or matching invariant breaks.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleInstance : public Error {
 public:
  using Error::Error;
};

class BadRange : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

}  // namespace bmatch
