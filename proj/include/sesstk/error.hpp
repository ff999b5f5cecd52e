#pragma once

#include <stdexcept>
#include <string>

namespace sesstk {

/// Raised by the surface parsers. Carries a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A construct that is not part of the requested process dialect.
class DialectError : public std::runtime_error {
 public:
  DialectError(const std::string& construct, const std::string& dialect)
      : std::runtime_error("construct '" + construct + "' is not allowed in dialect " + dialect),
        construct_(construct) {}

  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

/// State budget of an exhaustive search was exhausted.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t states, std::size_t frontier)
      : std::runtime_error("state budget exceeded: " + std::to_string(states) +
                           " states, frontier " + std::to_string(frontier)),
        frontier_(frontier) {}

  std::size_t frontier() const { return frontier_; }

 private:
  std::size_t frontier_;
};

/// Kinds of typing failures shared by the three checkers.
enum class TypeErrorKind {
  UnboundName,
  TypeMismatch,
  LinearityViolation,
  DualityMismatch,
  FreeOutputRejected,
  CutArityError,
  ReliabilityFailure,
  SharingExceeded,
  PayloadMismatch,
  MissingAnnotation,
  DialectViolation,
};

const char* to_string(TypeErrorKind kind);

/// Machine-readable typing failure. `location` is a rendered subterm.
struct TypeError {
  TypeErrorKind kind = TypeErrorKind::TypeMismatch;
  std::string name;
  std::string location;
  std::string message;
  int count = 0;  // SharingExceeded only

  /// "ERROR kind=... name=... at=..."
  std::string record() const;
};

/// Internal exception used by the checkers to unwind to their API boundary.
class TypeErrorException : public std::runtime_error {
 public:
  explicit TypeErrorException(TypeError err)
      : std::runtime_error(err.record()), error_(std::move(err)) {}

  const TypeError& error() const { return error_; }

 private:
  TypeError error_;
};

[[noreturn]] inline void type_fail(TypeErrorKind kind, std::string name, std::string location,
                                   std::string message, int count = 0) {
  throw TypeErrorException(
      TypeError{kind, std::move(name), std::move(location), std::move(message), count});
}

}  // namespace sesstk
