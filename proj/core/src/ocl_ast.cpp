#include "sosmc/ocl_ast.hpp"

#include <sstream>

#include "sosmc/value.hpp"

namespace sosmc {

OclExprPtr makeOcl(OclExpr e) { return std::make_shared<const OclExpr>(std::move(e)); }

OclExprPtr oclBool(bool v) { return makeOcl({BoolLit{v}}); }

OclExprPtr oclNumber(double v, bool integral) { return makeOcl({NumLit{v, integral}}); }

OclExprPtr oclPath(std::vector<std::string> steps) {
  return makeOcl({PathRef{std::move(steps)}});
}

OclExprPtr oclNot(OclExprPtr e) { return makeOcl({NotExpr{std::move(e)}}); }

OclExprPtr oclAnd(std::vector<OclExprPtr> args) {
  if (args.size() == 1) return args.front();
  return makeOcl({NaryBool{BoolOp::And, std::move(args)}});
}

OclExprPtr oclOr(std::vector<OclExprPtr> args) {
  if (args.size() == 1) return args.front();
  return makeOcl({NaryBool{BoolOp::Or, std::move(args)}});
}

OclExprPtr oclImplies(OclExprPtr l, OclExprPtr r) {
  return makeOcl({ImpliesExpr{std::move(l), std::move(r)}});
}

OclExprPtr oclCompare(CmpOp op, OclExprPtr l, OclExprPtr r) {
  return makeOcl({Compare{op, std::move(l), std::move(r)}});
}

bool structurallyEqual(const OclExprPtr& a, const OclExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, NumLit>) {
          return x.value == y.value && x.integral == y.integral;
        } else if constexpr (std::is_same_v<T, PathRef>) {
          return x.steps == y.steps;
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          if (x.op != y.op || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!structurallyEqual(x.args[i], y.args[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return structurallyEqual(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return structurallyEqual(x.lhs, y.lhs) && structurallyEqual(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Compare>) {
          return x.op == y.op && structurallyEqual(x.lhs, y.lhs) &&
                 structurallyEqual(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Arith>) {
          return x.op == y.op && structurallyEqual(x.lhs, y.lhs) &&
                 structurallyEqual(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, CollectionOp>) {
          return x.op == y.op && x.path.steps == y.path.steps;
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          return x.forAll == y.forAll && x.coll.steps == y.coll.steps &&
                 x.var == y.var && structurallyEqual(x.body, y.body);
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          return x.op == y.op && structurallyEqual(x.arg, y.arg);
        } else {
          static_assert(std::is_same_v<T, AtExpr>);
          return x.time == y.time && structurallyEqual(x.arg, y.arg);
        }
      },
      a->node);
}

namespace {

std::vector<std::string> substSteps(const std::vector<std::string>& steps,
                                    const std::string& var,
                                    const std::string& instanceId) {
  if (steps.empty() || steps.front() != var) return steps;
  std::vector<std::string> out = steps;
  out.front() = instanceId;
  return out;
}

}  // namespace

OclExprPtr substituteVar(const OclExprPtr& e, const std::string& var,
                         const std::string& instanceId) {
  if (!e) return e;
  return std::visit(
      [&](const auto& x) -> OclExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolLit> || std::is_same_v<T, NumLit>) {
          return e;
        } else if constexpr (std::is_same_v<T, PathRef>) {
          auto steps = substSteps(x.steps, var, instanceId);
          if (steps == x.steps) return e;
          return oclPath(std::move(steps));
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          NaryBool out{x.op, {}};
          out.args.reserve(x.args.size());
          for (const auto& a : x.args) out.args.push_back(substituteVar(a, var, instanceId));
          return makeOcl({std::move(out)});
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return oclNot(substituteVar(x.arg, var, instanceId));
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return oclImplies(substituteVar(x.lhs, var, instanceId),
                            substituteVar(x.rhs, var, instanceId));
        } else if constexpr (std::is_same_v<T, Compare>) {
          return oclCompare(x.op, substituteVar(x.lhs, var, instanceId),
                            substituteVar(x.rhs, var, instanceId));
        } else if constexpr (std::is_same_v<T, Arith>) {
          return makeOcl({Arith{x.op, substituteVar(x.lhs, var, instanceId),
                                substituteVar(x.rhs, var, instanceId)}});
        } else if constexpr (std::is_same_v<T, CollectionOp>) {
          return makeOcl({CollectionOp{PathRef{substSteps(x.path.steps, var, instanceId)}, x.op}});
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          QuantExpr out = x;
          out.coll.steps = substSteps(x.coll.steps, var, instanceId);
          if (x.var != var) {  // inner binder shadows
            out.body = substituteVar(x.body, var, instanceId);
          }
          return makeOcl({std::move(out)});
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          return makeOcl({RunAggExpr{x.op, substituteVar(x.arg, var, instanceId)}});
        } else {
          static_assert(std::is_same_v<T, AtExpr>);
          return makeOcl({AtExpr{substituteVar(x.arg, var, instanceId), x.time}});
        }
      },
      e->node);
}

bool containsRunOperator(const OclExprPtr& e) {
  if (!e) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RunAggExpr> || std::is_same_v<T, AtExpr>) {
          return true;
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          for (const auto& a : x.args) {
            if (containsRunOperator(a)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return containsRunOperator(x.arg);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return containsRunOperator(x.lhs) || containsRunOperator(x.rhs);
        } else if constexpr (std::is_same_v<T, Compare>) {
          return containsRunOperator(x.lhs) || containsRunOperator(x.rhs);
        } else if constexpr (std::is_same_v<T, Arith>) {
          return containsRunOperator(x.lhs) || containsRunOperator(x.rhs);
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          return containsRunOperator(x.body);
        } else {
          return false;
        }
      },
      e->node);
}

namespace {

int countRunOperators(const OclExprPtr& e) {
  if (!e) return 0;
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RunAggExpr>) {
          return 1 + countRunOperators(x.arg);
        } else if constexpr (std::is_same_v<T, AtExpr>) {
          return 1 + countRunOperators(x.arg);
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          int n = 0;
          for (const auto& a : x.args) n += countRunOperators(a);
          return n;
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return countRunOperators(x.arg);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return countRunOperators(x.lhs) + countRunOperators(x.rhs);
        } else if constexpr (std::is_same_v<T, Compare>) {
          return countRunOperators(x.lhs) + countRunOperators(x.rhs);
        } else if constexpr (std::is_same_v<T, Arith>) {
          return countRunOperators(x.lhs) + countRunOperators(x.rhs);
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          return countRunOperators(x.body);
        } else {
          return 0;
        }
      },
      e->node);
}

}  // namespace

int maxRunOperatorsPerComparison(const OclExprPtr& e) {
  if (!e) return 0;
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Compare>) {
          return countRunOperators(x.lhs) + countRunOperators(x.rhs);
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          int m = 0;
          for (const auto& a : x.args) m = std::max(m, maxRunOperatorsPerComparison(a));
          return m;
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return maxRunOperatorsPerComparison(x.arg);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return std::max(maxRunOperatorsPerComparison(x.lhs),
                          maxRunOperatorsPerComparison(x.rhs));
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          return maxRunOperatorsPerComparison(x.body);
        } else {
          // A bare run operator outside any comparison counts as one.
          return countRunOperators(e);
        }
      },
      e->node);
}

namespace {

const char* cmpText(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

const char* arithText(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

// Precedence for minimal parenthesisation; higher binds tighter. Unary
// not binds tighter than comparisons and arithmetic, as in the parser.
enum Prec { PImplies = 1, POr, PAnd, PCmp, PAdd, PMul, PNot, PAtom };

int precedence(const OclExpr& e) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ImpliesExpr>) return PImplies;
        else if constexpr (std::is_same_v<T, NaryBool>)
          return x.op == BoolOp::Or ? POr : PAnd;
        else if constexpr (std::is_same_v<T, NotExpr>) return PNot;
        else if constexpr (std::is_same_v<T, Compare>) return PCmp;
        else if constexpr (std::is_same_v<T, Arith>)
          return (x.op == ArithOp::Add || x.op == ArithOp::Sub) ? PAdd : PMul;
        else return PAtom;
      },
      e.node);
}

void printExpr(std::ostream& os, const OclExprPtr& e, int parentPrec);

void printChild(std::ostream& os, const OclExprPtr& e, int myPrec) {
  printExpr(os, e, myPrec);
}

std::string joinPath(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i];
  }
  return out;
}

void printExpr(std::ostream& os, const OclExprPtr& e, int parentPrec) {
  int myPrec = precedence(*e);
  bool parens = myPrec < parentPrec;
  if (parens) os << '(';
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolLit>) {
          os << (x.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, NumLit>) {
          if (x.integral) {
            os << static_cast<long long>(x.value);
          } else {
            os << formatNumber(x.value);
          }
        } else if constexpr (std::is_same_v<T, PathRef>) {
          os << joinPath(x.steps);
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          const char* sep = x.op == BoolOp::And ? " and " : " or ";
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i) os << sep;
            printChild(os, x.args[i], myPrec + 1);
          }
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          os << "not ";
          printChild(os, x.arg, myPrec);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          printChild(os, x.lhs, myPrec + 1);
          os << " implies ";
          printChild(os, x.rhs, myPrec);  // right associative
        } else if constexpr (std::is_same_v<T, Compare>) {
          printChild(os, x.lhs, myPrec + 1);
          os << ' ' << cmpText(x.op) << ' ';
          printChild(os, x.rhs, myPrec + 1);
        } else if constexpr (std::is_same_v<T, Arith>) {
          printChild(os, x.lhs, myPrec);
          os << ' ' << arithText(x.op) << ' ';
          printChild(os, x.rhs, myPrec + 1);  // left associative
        } else if constexpr (std::is_same_v<T, CollectionOp>) {
          os << joinPath(x.path.steps)
             << (x.op == CollOp::Size ? "->size()" : "->sum()");
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          os << joinPath(x.coll.steps) << (x.forAll ? "->forAll(" : "->exists(")
             << x.var << " | ";
          printExpr(os, x.body, 0);
          os << ')';
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          switch (x.op) {
            case PathAgg::Mean: os << "mean("; break;
            case PathAgg::Sum: os << "sum("; break;
            case PathAgg::Prod: os << "prod("; break;
          }
          printExpr(os, x.arg, 0);
          os << ')';
        } else {
          static_assert(std::is_same_v<T, AtExpr>);
          os << "at(";
          printExpr(os, x.arg, 0);
          os << ", " << formatNumber(x.time) << ')';
        }
      },
      e->node);
  if (parens) os << ')';
}

}  // namespace

std::string printOcl(const OclExprPtr& e) {
  std::ostringstream os;
  printExpr(os, e, 0);
  return os.str();
}

}  // namespace sosmc
