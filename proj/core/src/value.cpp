#include "sosmc/value.hpp"

#include <charconv>

#include "sosmc/errors.hpp"

namespace sosmc {

bool Value::asBool() const {
  if (const bool* b = std::get_if<bool>(&v_)) return *b;
  throw EvalError("expected a boolean, got " + toString());
}

double Value::asNumber() const {
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
    return static_cast<double>(*i);
  }
  if (const double* d = std::get_if<double>(&v_)) return *d;
  throw EvalError("expected a number, got " + toString());
}

const Symbol& Value::asSymbol() const {
  if (const Symbol* s = std::get_if<Symbol>(&v_)) return *s;
  throw EvalError("expected an enum symbol, got " + toString());
}

bool Value::equals(const Value& other) const {
  if (isNumeric() && other.isNumeric()) return asNumber() == other.asNumber();
  if (isBool() && other.isBool()) return asBool() == other.asBool();
  if (isSymbol() && other.isSymbol()) return asSymbol() == other.asSymbol();
  throw EvalError("cannot compare " + toString() + " with " + other.toString());
}

int Value::compare(const Value& other) const {
  if (!isNumeric() || !other.isNumeric()) {
    throw EvalError("ordering requires numbers, got " + toString() + " and " +
                    other.toString());
  }
  double a = asNumber();
  double b = other.asNumber();
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

std::string Value::toString() const {
  if (const bool* b = std::get_if<bool>(&v_)) return *b ? "true" : "false";
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
    return std::to_string(*i);
  }
  if (const double* d = std::get_if<double>(&v_)) return formatNumber(*d);
  return std::get<Symbol>(v_).name;
}

std::string formatNumber(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace sosmc
