#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sosmc/ocl_ast.hpp"
#include "sosmc/time_unit.hpp"

namespace sosmc {

struct BltlFormula;
using BltlPtr = std::shared_ptr<const BltlFormula>;

/// Run-predicate flavor, for diagnostics and dumps.
enum class RunPredKind { OccCompare, MeanCompare, SumCompare, ProdCompare, AtCompare };

struct BTrue {};
struct BFalse {};

/// State predicate: closed OCL boolean checked at the first sample of the
/// suffix under evaluation.
struct StatePred {
  OclExprPtr expr;
  Bindings bindings;
};

/// occ(prop, a, b) ~ n over the suffix's own time origin.
struct OccPred {
  OclExprPtr prop;
  Bindings bindings;
  double lo = 0;
  double hi = 0;
  CmpOp rel = CmpOp::Ge;
  long long count = 0;
};

/// Comparison whose sides may contain mean/sum/prod/at over the suffix.
/// Subexpressions without a run operator are evaluated at the suffix's
/// first sample.
struct AggPred {
  OclExprPtr lhs;
  CmpOp rel = CmpOp::Le;
  OclExprPtr rhs;
  Bindings bindings;
};

/// Procedural split check over [origin+lo, origin+hi]: when `subject`
/// holds at every sample of the window, some sample time c in the window
/// must split it so that `first` holds on [lo, c] and `second` holds on
/// [c, hi] (both closed). Vacuously true when `subject` fails somewhere.
struct SplitPred {
  OclExprPtr subject;
  OclExprPtr first;
  OclExprPtr second;
  Bindings bindings;
  double lo = 0;
  double hi = 0;
};

struct BNot {
  BltlPtr arg;
};
struct BAnd {
  std::vector<BltlPtr> args;
};
struct BOr {
  std::vector<BltlPtr> args;
};
struct BImplies {
  BltlPtr lhs, rhs;
};

/// Temporal bounds are non-negative times in model base units;
/// an infinite bound means "to the end of the trace".
struct BFinally {
  double bound = 0;
  BltlPtr arg;
};
struct BGlobally {
  double bound = 0;
  BltlPtr arg;
};
struct BNext {
  double bound = 0;
  BltlPtr arg;
};
struct BUntil {
  double bound = 0;
  BltlPtr lhs, rhs;
};
struct BWeakUntil {
  double bound = 0;
  BltlPtr lhs, rhs;
};

struct BltlFormula {
  std::variant<BTrue, BFalse, StatePred, OccPred, AggPred, SplitPred, BNot,
               BAnd, BOr, BImplies, BFinally, BGlobally, BNext, BUntil,
               BWeakUntil>
      node;
};

BltlPtr makeBltl(BltlFormula f);
BltlPtr bltlTrue();
BltlPtr bltlFalse();
BltlPtr bltlNot(BltlPtr a);
BltlPtr bltlAnd(std::vector<BltlPtr> args);
BltlPtr bltlOr(std::vector<BltlPtr> args);
BltlPtr bltlImplies(BltlPtr l, BltlPtr r);
BltlPtr bltlFinally(double bound, BltlPtr a);
BltlPtr bltlGlobally(double bound, BltlPtr a);
BltlPtr bltlNext(double bound, BltlPtr a);
BltlPtr bltlUntil(double bound, BltlPtr l, BltlPtr r);
BltlPtr bltlWeakUntil(double bound, BltlPtr l, BltlPtr r);
BltlPtr bltlState(OclExprPtr e, Bindings b = {});

bool structurallyEqual(const BltlPtr& a, const BltlPtr& b);

RunPredKind runPredKind(const AggPred& p);

/// Formula text (.bltl). State predicates appear in braces, run
/// predicates as run(...) and occ predicates as occ([prop], a, b) ~ n:
///
///   G<=30 ({x.p} => X<=0 F<=180 {x.q})
///   run(mean(SoS.itsDistricts.fireArea->sum()) <= 0.0001)
///   occ([x.p], 0, 5) <= 2
///
/// Formulas must be closed (no bindings) to print.
std::string printBltl(const BltlPtr& f);
BltlPtr parseBltl(std::string_view text, const TimeScale& scale = {});

/// Verdict with a best-effort diagnostic for violated formulas.
struct Verdict {
  bool holds = false;
  std::optional<double> witnessTime;  // first violating time when available
  std::string note;
};

}  // namespace sosmc
