#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace sosmc {

/// Interned enum literal. Symbols compare for equality only; ordering a
/// symbol is a type error at evaluation time.
struct Symbol {
  std::string name;

  bool operator==(const Symbol&) const = default;
};

/// Attribute value: boolean, integer, real or enum symbol.
/// Integers and reals unify to reals in mixed comparisons; equality on
/// reals is exact representation equality.
class Value {
 public:
  Value() : v_(false) {}
  Value(bool b) : v_(b) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(Symbol s) : v_(std::move(s)) {}

  bool isBool() const { return std::holds_alternative<bool>(v_); }
  bool isInt() const { return std::holds_alternative<std::int64_t>(v_); }
  bool isReal() const { return std::holds_alternative<double>(v_); }
  bool isSymbol() const { return std::holds_alternative<Symbol>(v_); }
  bool isNumeric() const { return isInt() || isReal(); }

  bool asBool() const;        // throws EvalError unless boolean
  double asNumber() const;    // throws EvalError unless numeric
  const Symbol& asSymbol() const;

  /// Semantic equality (mixed int/real compares numerically).
  /// Cross-kind comparisons beyond the numeric tower throw EvalError.
  bool equals(const Value& other) const;

  /// Numeric ordering; throws EvalError for booleans and symbols.
  int compare(const Value& other) const;

  /// Trace/document rendering: true/false, shortest round-trip numbers,
  /// bare symbol names.
  std::string toString() const;

  bool operator==(const Value&) const = default;

 private:
  std::variant<bool, std::int64_t, double, Symbol> v_;
};

/// Shortest round-trip decimal rendering of a double ("30", "0.02").
std::string formatNumber(double x);

}  // namespace sosmc
