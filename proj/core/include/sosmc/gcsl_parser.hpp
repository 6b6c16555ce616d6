#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sosmc/gcsl_ast.hpp"
#include "sosmc/time_unit.hpp"

namespace sosmc {

/// Parses a contract document (.gcsl): one or more contracts, "--" line
/// comments. Time literals are normalized into `scale` base units at parse
/// time. Throws ParseError (syntax, with location) or SemanticError
/// (nesting depth, duplicate binder, interval bounds, threshold range).
std::vector<GcslContract> parseContracts(std::string_view text,
                                         const TimeScale& scale = {});

/// Single behavioral pattern, e.g. "whenever [x.p] occurs [x.q] occurs
/// within [6 months]".
PatternExpr parsePattern(std::string_view text, const TimeScale& scale = {});

/// Property: quantified pattern, bare pattern, or OCL proposition.
PropertyPtr parseProperty(std::string_view text, const TimeScale& scale = {});

/// Closed OCL expression (used by the eval subcommand and tests).
OclExprPtr parseOclExpr(std::string_view text, const TimeScale& scale = {});

// Pretty printers. Output re-parses to a structurally identical AST.
std::string prettyPrint(const GcslContract& contract, const TimeScale& scale = {});
std::string prettyPrint(const PropertyPtr& property, const TimeScale& scale = {});
std::string prettyPrint(const PatternExpr& pattern, const TimeScale& scale = {});

/// Indented diagnostic dump of the AST (the `parse` subcommand output).
std::string dumpContract(const GcslContract& contract);

}  // namespace sosmc
