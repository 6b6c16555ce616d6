#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sosmc {

struct OclExpr;
using OclExprPtr = std::shared_ptr<const OclExpr>;

/// Variable -> instance-id environment for expressions with free variables.
using Bindings = std::map<std::string, std::string>;

enum class CmpOp { Lt, Le, Eq, Ge, Gt };
enum class ArithOp { Add, Sub, Mul, Div };
enum class BoolOp { And, Or };
enum class CollOp { Size, Sum };            // coll->size(), coll->sum()
enum class PathAgg { Mean, Sum, Prod };     // mean(e), sum(e), prod(e) over a run

struct BoolLit {
  bool value = false;
};

struct NumLit {
  double value = 0;
  bool integral = false;  // printed without decimal point
};

/// Dot navigation: SoS.itsDistricts, district_1.population, ffCar.isAtFireStation.
/// The head resolves against bindings, then instances, then the root "SoS",
/// then (single segment only) enum literals.
struct PathRef {
  std::vector<std::string> steps;
};

/// Flattened conjunction/disjunction; the parser folds chains of the same
/// connective into one node.
struct NaryBool {
  BoolOp op = BoolOp::And;
  std::vector<OclExprPtr> args;
};

struct NotExpr {
  OclExprPtr arg;
};

struct ImpliesExpr {
  OclExprPtr lhs, rhs;
};

struct Compare {
  CmpOp op = CmpOp::Eq;
  OclExprPtr lhs, rhs;
};

struct Arith {
  ArithOp op = ArithOp::Add;
  OclExprPtr lhs, rhs;
};

/// Collection operator applied to a collection-valued path.
struct CollectionOp {
  PathRef path;
  CollOp op = CollOp::Size;
};

/// coll->forAll(x | body) / coll->exists(x | body).
struct QuantExpr {
  bool forAll = true;
  PathRef coll;
  std::string var;
  OclExprPtr body;
};

/// Path operator over a run: mean/sum/prod of a state expression sampled
/// along the trace. Only meaningful inside run predicates.
struct RunAggExpr {
  PathAgg op = PathAgg::Mean;
  OclExprPtr arg;
};

/// at(e, t): value of e at the state reached t time units after the
/// evaluation origin.
struct AtExpr {
  OclExprPtr arg;
  double time = 0;
};

struct OclExpr {
  std::variant<BoolLit, NumLit, PathRef, NaryBool, NotExpr, ImpliesExpr,
               Compare, Arith, CollectionOp, QuantExpr, RunAggExpr, AtExpr>
      node;
};

// Construction helpers. All trees are immutable and shareable.
OclExprPtr makeOcl(OclExpr e);
OclExprPtr oclBool(bool v);
OclExprPtr oclNumber(double v, bool integral = false);
OclExprPtr oclPath(std::vector<std::string> steps);
OclExprPtr oclNot(OclExprPtr e);
OclExprPtr oclAnd(std::vector<OclExprPtr> args);
OclExprPtr oclOr(std::vector<OclExprPtr> args);
OclExprPtr oclImplies(OclExprPtr l, OclExprPtr r);
OclExprPtr oclCompare(CmpOp op, OclExprPtr l, OclExprPtr r);

bool structurallyEqual(const OclExprPtr& a, const OclExprPtr& b);

/// Replaces every path whose head is `var` with the same path rooted at
/// `instanceId`, descending through the whole expression. Shadowing
/// binders are respected.
OclExprPtr substituteVar(const OclExprPtr& e, const std::string& var,
                         const std::string& instanceId);

/// True when the expression contains mean/sum/prod/at anywhere.
bool containsRunOperator(const OclExprPtr& e);

/// Number of run operators directly involved in each comparison; used to
/// police run operators inside pattern slots.
int maxRunOperatorsPerComparison(const OclExprPtr& e);

/// GCSL concrete syntax (re-parseable).
std::string printOcl(const OclExprPtr& e);

}  // namespace sosmc
