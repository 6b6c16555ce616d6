#pragma once

#include <stdexcept>
#include <string>

namespace sosmc {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a model, contract, formula or trace document.
/// Lines and columns are 1-based; 0 means "not attributable".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  int line_;
  int column_;
};

/// Well-formed input that violates a semantic rule (unknown name,
/// duplicate instance, inconsistent interval, nesting limit, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Raised while evaluating an expression against a state
/// (unresolved name, type mismatch, division by zero).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Trace queried outside its time range, or too short for a formula.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Simulation could not complete (livelock guard, bad distribution).
class SimError : public Error {
 public:
  using Error::Error;
};

}  // namespace sosmc
