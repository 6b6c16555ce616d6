#pragma once

// Cross-parser entry points shared between the document parsers.

#include "lexer.hpp"
#include "sosmc/gcsl_ast.hpp"
#include "sosmc/ocl_ast.hpp"
#include "sosmc/time_unit.hpp"

namespace sosmc::detail {

/// Full OCL expression starting at the cursor (implemented with the
/// contract parser; used by guards, actions and formula leaves).
OclExprPtr parseOclExpression(Cursor& cur, const TimeScale& scale);

/// "<number> [unit]" normalized to base units. A trailing identifier must
/// be a time unit.
double parseTimeValue(Cursor& cur, const TimeScale& scale);

/// Like parseTimeValue, but leaves a trailing identifier alone unless it
/// names a unit (formula bounds are followed by operands).
double parseTimeValueLenient(Cursor& cur, const TimeScale& scale);

/// Interval "[a - b]", "(a - b]", "[b]" (meaning [0, b]).
TimeInterval parseInterval(Cursor& cur, const TimeScale& scale);

}  // namespace sosmc::detail
