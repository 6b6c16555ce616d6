#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sosmc/ocl_ast.hpp"

namespace sosmc {

/// Time interval in model base units. Closedness mirrors the source
/// brackets; translation uses the numeric bounds. hiInfinite marks an
/// interval whose upper bound is replaced by the verification horizon.
struct TimeInterval {
  double lo = 0;
  double hi = 0;
  bool loClosed = true;
  bool hiClosed = true;
  bool hiInfinite = false;

  bool operator==(const TimeInterval&) const = default;
};

/// The eleven behavioral pattern templates. Slot usage:
///
///   kind                  prop      prop1     prop2    count  intervals
///   WheneverHoldsDuring   trigger   holds     -        -      [a,b]
///   ImpliesForever        trigger   holds     -        -      -
///   Always                subject   -         -        -      -
///   WheneverHolds         trigger   holds     -        -      -
///   WheneverImpliesDuring trigger   lhs       rhs      -      [a,b]
///   WheneverNotDuring     trigger   avoided   -        -      [a,b]
///   WheneverWithin        trigger   target    -        -      [a,b]
///   OccursRaises          counted   raised    -        n      [a,b]
///   OccursAtMost          counted   -         -        n      [a,b]
///   DuringRaises          held      raised    -        -      [a,b]
///   DuringImpliesThen     subject   first     second   -      [a,b],[a,c],[c,b]
enum class PatternKind {
  WheneverHoldsDuring,
  ImpliesForever,
  Always,
  WheneverHolds,
  WheneverImpliesDuring,
  WheneverNotDuring,
  WheneverWithin,
  OccursRaises,
  OccursAtMost,
  DuringRaises,
  DuringImpliesThen,
};

struct PatternExpr {
  PatternKind kind = PatternKind::Always;
  OclExprPtr prop;
  OclExprPtr prop1;
  OclExprPtr prop2;
  long long count = 0;
  std::vector<TimeInterval> intervals;
};

struct PropertyExpr;
using PropertyPtr = std::shared_ptr<const PropertyExpr>;

/// coll->forAll(x | property) at the property level: the body may be a
/// pattern or another quantifier (depth limit 2).
struct Quantified {
  bool forAll = true;
  PathRef collection;
  std::string var;
  PropertyPtr body;
};

/// Conjunction/disjunction of properties. Not part of the surface
/// grammar; produced by quantifier unfolding.
struct PropConnective {
  bool conjunction = true;
  std::vector<PropertyPtr> parts;
};

struct PropertyExpr {
  std::variant<Quantified, PatternExpr, OclExprPtr, PropConnective> node;
};

PropertyPtr makeProperty(PropertyExpr p);

struct GcslContract {
  std::vector<std::string> viewpoints;
  std::string name;
  PropertyPtr assumption;  // null: implicitly true
  PropertyPtr goal;
  double confidence = 1.0;  // normalized to (0, 1]
};

bool structurallyEqual(const PropertyPtr& a, const PropertyPtr& b);
bool structurallyEqual(const PatternExpr& a, const PatternExpr& b);
bool structurallyEqual(const GcslContract& a, const GcslContract& b);

}  // namespace sosmc
