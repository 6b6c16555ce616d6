#pragma once

#include "sosmc/bltl.hpp"
#include "sosmc/gcsl_ast.hpp"
#include "sosmc/model.hpp"

namespace sosmc {

struct TranslateOptions {
  /// during/implies/then: check the split procedurally over sample times
  /// instead of the fixed split point taken from the intervals.
  bool existentialSplit = false;
  /// Run simplifyFormula over the result (removes X<=0 wrappers and
  /// constant-foldable connectives). Off by default so dumps keep the
  /// mechanical translation shape.
  bool simplify = false;
};

/// Replaces forAll/exists over statically known collections with
/// conjunctions/disjunctions in declaration order, recursively, both at
/// the property level and inside OCL propositions. Everything else is
/// returned unchanged. Throws SemanticError on unresolved collections or
/// quantifier nesting beyond 2.
PropertyPtr unfold(const PropertyPtr& property, const SosModel& model);
OclExprPtr unfoldOcl(const OclExprPtr& expr, const SosModel& model);

/// Maps one behavioral pattern to its bounded-temporal formula under the
/// verification horizon k (model base units). Interval bounds written as
/// +inf are replaced by k. Throws SemanticError when a consistency
/// condition fails, quoting the condition.
BltlPtr translatePattern(const PatternExpr& pattern, double k,
                         const TranslateOptions& options = {});

/// unfold + pattern mapping for a whole property.
BltlPtr translateProperty(const PropertyPtr& property, double k, const SosModel& model,
                          const TranslateOptions& options = {});

/// Assumption => Goal (goal alone when the assumption is absent).
BltlPtr translateContract(const GcslContract& contract, double k, const SosModel& model,
                          const TranslateOptions& options = {});

/// Removes X<=0 wrappers, true/false connective units and double
/// negation. Semantics preserving on every trace.
BltlPtr simplifyFormula(const BltlPtr& formula);

}  // namespace sosmc
