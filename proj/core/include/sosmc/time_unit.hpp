#pragma once

#include <string>
#include <string_view>

namespace sosmc {

/// Time base of a model. All durations in contracts, formulas and traces
/// are plain reals expressed in this unit. Calendar units are fixed:
/// month = 30 days, year = 365 days.
struct TimeScale {
  std::string baseUnit = "s";

  bool operator==(const TimeScale&) const = default;
};

/// Seconds in one unit. Known units: ms, s, min, hour, day, week, month,
/// year (singular or plural). Throws SemanticError on anything else.
double unitFactorSeconds(std::string_view unit);

bool isTimeUnit(std::string_view unit);

/// Converts `count` of `unit` into base units of `scale`.
double convertToBase(double count, std::string_view unit, const TimeScale& scale);

/// Parses a duration like "6 months", "7months", "0.5 day" or a bare
/// number (already in base units). Shared by the contract parser and the
/// --time-bound / --horizon command line flags.
double parseDuration(std::string_view text, const TimeScale& scale);

}  // namespace sosmc
