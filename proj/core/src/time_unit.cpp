#include "sosmc/time_unit.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "sosmc/errors.hpp"

namespace sosmc {

namespace {

std::string_view stripPlural(std::string_view unit) {
  if (unit.size() > 1 && unit.back() == 's' && unit != "ms" && unit != "s") {
    unit.remove_suffix(1);
  }
  return unit;
}

}  // namespace

double unitFactorSeconds(std::string_view unit) {
  unit = stripPlural(unit);
  if (unit == "ms") return 1e-3;
  if (unit == "s" || unit == "sec" || unit == "second") return 1.0;
  if (unit == "min" || unit == "minute") return 60.0;
  if (unit == "h" || unit == "hour") return 3600.0;
  if (unit == "day") return 86400.0;
  if (unit == "week") return 7.0 * 86400.0;
  if (unit == "month") return 30.0 * 86400.0;  // fixed convention
  if (unit == "year") return 365.0 * 86400.0;  // fixed convention
  throw SemanticError("unknown time unit '" + std::string(unit) + "'");
}

bool isTimeUnit(std::string_view unit) {
  unit = stripPlural(unit);
  for (std::string_view u : {"ms", "s", "sec", "second", "min", "minute", "h",
                             "hour", "day", "week", "month", "year"}) {
    if (unit == u) return true;
  }
  return false;
}

double convertToBase(double count, std::string_view unit, const TimeScale& scale) {
  double factor = unitFactorSeconds(unit) / unitFactorSeconds(scale.baseUnit);
  // Values printed in base units must re-parse to the same bits.
  if (factor == 1.0) return count;
  return count * factor;
}

double parseDuration(std::string_view text, const TimeScale& scale) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t start = i;
  while (i < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
          text[i] == '+' || text[i] == '-' || text[i] == 'e' || text[i] == 'E')) {
    // "6months" puts a letter right after the digits; consume an 'e' only
    // when it is an exponent (followed by a digit or sign).
    if (text[i] == 'e' || text[i] == 'E') {
      if (i + 1 >= text.size() ||
          (!std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
           text[i + 1] != '+' && text[i + 1] != '-')) {
        break;
      }
    }
    ++i;
  }
  if (i == start) throw SemanticError("invalid duration '" + std::string(text) + "'");
  double count = 0;
  auto res = std::from_chars(text.data() + start, text.data() + i, count);
  if (res.ec != std::errc{} || res.ptr != text.data() + i) {
    throw SemanticError("invalid duration '" + std::string(text) + "'");
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::string_view unit = text.substr(i);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) {
    unit.remove_suffix(1);
  }
  if (count < 0) throw SemanticError("duration must be non-negative");
  if (unit.empty()) return count;  // already in base units
  return convertToBase(count, unit, scale);
}

}  // namespace sosmc
