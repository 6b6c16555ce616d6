#include "sosmc/bltl.hpp"

#include <cmath>
#include <sstream>

#include "lexer.hpp"
#include "parse_internal.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/value.hpp"

namespace sosmc {

BltlPtr makeBltl(BltlFormula f) { return std::make_shared<const BltlFormula>(std::move(f)); }

BltlPtr bltlTrue() { return makeBltl({BTrue{}}); }
BltlPtr bltlFalse() { return makeBltl({BFalse{}}); }
BltlPtr bltlNot(BltlPtr a) { return makeBltl({BNot{std::move(a)}}); }

BltlPtr bltlAnd(std::vector<BltlPtr> args) {
  if (args.size() == 1) return args.front();
  return makeBltl({BAnd{std::move(args)}});
}

BltlPtr bltlOr(std::vector<BltlPtr> args) {
  if (args.size() == 1) return args.front();
  return makeBltl({BOr{std::move(args)}});
}

BltlPtr bltlImplies(BltlPtr l, BltlPtr r) {
  return makeBltl({BImplies{std::move(l), std::move(r)}});
}

BltlPtr bltlFinally(double bound, BltlPtr a) {
  return makeBltl({BFinally{bound, std::move(a)}});
}

BltlPtr bltlGlobally(double bound, BltlPtr a) {
  return makeBltl({BGlobally{bound, std::move(a)}});
}

BltlPtr bltlNext(double bound, BltlPtr a) {
  return makeBltl({BNext{bound, std::move(a)}});
}

BltlPtr bltlUntil(double bound, BltlPtr l, BltlPtr r) {
  return makeBltl({BUntil{bound, std::move(l), std::move(r)}});
}

BltlPtr bltlWeakUntil(double bound, BltlPtr l, BltlPtr r) {
  return makeBltl({BWeakUntil{bound, std::move(l), std::move(r)}});
}

BltlPtr bltlState(OclExprPtr e, Bindings b) {
  return makeBltl({StatePred{std::move(e), std::move(b)}});
}

bool structurallyEqual(const BltlPtr& a, const BltlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, BTrue> || std::is_same_v<T, BFalse>) {
          return true;
        } else if constexpr (std::is_same_v<T, StatePred>) {
          return x.bindings == y.bindings && structurallyEqual(x.expr, y.expr);
        } else if constexpr (std::is_same_v<T, OccPred>) {
          return x.bindings == y.bindings && x.lo == y.lo && x.hi == y.hi &&
                 x.rel == y.rel && x.count == y.count &&
                 structurallyEqual(x.prop, y.prop);
        } else if constexpr (std::is_same_v<T, AggPred>) {
          return x.bindings == y.bindings && x.rel == y.rel &&
                 structurallyEqual(x.lhs, y.lhs) && structurallyEqual(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, SplitPred>) {
          return x.bindings == y.bindings && x.lo == y.lo && x.hi == y.hi &&
                 structurallyEqual(x.subject, y.subject) &&
                 structurallyEqual(x.first, y.first) &&
                 structurallyEqual(x.second, y.second);
        } else if constexpr (std::is_same_v<T, BNot>) {
          return structurallyEqual(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, BAnd> || std::is_same_v<T, BOr>) {
          if (x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!structurallyEqual(x.args[i], y.args[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, BImplies>) {
          return structurallyEqual(x.lhs, y.lhs) && structurallyEqual(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, BFinally> ||
                             std::is_same_v<T, BGlobally> ||
                             std::is_same_v<T, BNext>) {
          return x.bound == y.bound && structurallyEqual(x.arg, y.arg);
        } else {
          return x.bound == y.bound && structurallyEqual(x.lhs, y.lhs) &&
                 structurallyEqual(x.rhs, y.rhs);
        }
      },
      a->node);
}

RunPredKind runPredKind(const AggPred& p) {
  // First run operator found, scanning lhs then rhs.
  struct Scan {
    std::optional<RunPredKind> found;
    void visit(const OclExprPtr& e) {
      if (!e || found) return;
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, RunAggExpr>) {
              switch (x.op) {
                case PathAgg::Mean: found = RunPredKind::MeanCompare; break;
                case PathAgg::Sum: found = RunPredKind::SumCompare; break;
                case PathAgg::Prod: found = RunPredKind::ProdCompare; break;
              }
            } else if constexpr (std::is_same_v<T, AtExpr>) {
              found = RunPredKind::AtCompare;
            } else if constexpr (std::is_same_v<T, Arith>) {
              visit(x.lhs);
              visit(x.rhs);
            } else if constexpr (std::is_same_v<T, Compare>) {
              visit(x.lhs);
              visit(x.rhs);
            } else if constexpr (std::is_same_v<T, NaryBool>) {
              for (const auto& a : x.args) visit(a);
            } else if constexpr (std::is_same_v<T, NotExpr>) {
              visit(x.arg);
            } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
              visit(x.lhs);
              visit(x.rhs);
            }
          },
          e->node);
    }
  } scan;
  scan.visit(p.lhs);
  scan.visit(p.rhs);
  return scan.found.value_or(RunPredKind::AtCompare);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

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

std::string boundText(double bound) {
  if (std::isinf(bound)) return "end";
  return formatNumber(bound);
}

void requireClosed(const Bindings& b) {
  if (!b.empty()) {
    throw Error("cannot print a formula with unresolved bindings; substitute first");
  }
}

// Precedence: implies < or < and < unary/atom. Until/WeakUntil always print
// parenthesized as (lhs U<=k rhs).
enum Prec { PImp = 1, POr, PAnd, PUnary };

void print(std::ostream& os, const BltlPtr& f, int parent);

void printChildren(std::ostream& os, const std::vector<BltlPtr>& args,
                   const char* sep, int myPrec) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << sep;
    print(os, args[i], myPrec + 1);
  }
}

void print(std::ostream& os, const BltlPtr& f, int parent) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BTrue>) {
          os << "true";
        } else if constexpr (std::is_same_v<T, BFalse>) {
          os << "false";
        } else if constexpr (std::is_same_v<T, StatePred>) {
          requireClosed(x.bindings);
          os << '{' << printOcl(x.expr) << '}';
        } else if constexpr (std::is_same_v<T, OccPred>) {
          requireClosed(x.bindings);
          os << "occ([" << printOcl(x.prop) << "], " << formatNumber(x.lo) << ", "
             << formatNumber(x.hi) << ") " << cmpText(x.rel) << ' ' << x.count;
        } else if constexpr (std::is_same_v<T, AggPred>) {
          requireClosed(x.bindings);
          os << "run(" << printOcl(x.lhs) << ' ' << cmpText(x.rel) << ' '
             << printOcl(x.rhs) << ')';
        } else if constexpr (std::is_same_v<T, SplitPred>) {
          requireClosed(x.bindings);
          os << "split([" << printOcl(x.subject) << "], [" << printOcl(x.first)
             << "], [" << printOcl(x.second) << "], " << formatNumber(x.lo) << ", "
             << formatNumber(x.hi) << ')';
        } else if constexpr (std::is_same_v<T, BNot>) {
          os << "not ";
          print(os, x.arg, PUnary);
        } else if constexpr (std::is_same_v<T, BAnd>) {
          bool parens = PAnd < parent;
          if (parens) os << '(';
          printChildren(os, x.args, " and ", PAnd);
          if (parens) os << ')';
        } else if constexpr (std::is_same_v<T, BOr>) {
          bool parens = POr < parent;
          if (parens) os << '(';
          printChildren(os, x.args, " or ", POr);
          if (parens) os << ')';
        } else if constexpr (std::is_same_v<T, BImplies>) {
          bool parens = PImp < parent;
          if (parens) os << '(';
          print(os, x.lhs, PImp + 1);
          os << " => ";
          print(os, x.rhs, PImp);  // right associative
          if (parens) os << ')';
        } else if constexpr (std::is_same_v<T, BFinally>) {
          os << "F<=" << boundText(x.bound) << ' ';
          print(os, x.arg, PUnary);
        } else if constexpr (std::is_same_v<T, BGlobally>) {
          os << "G<=" << boundText(x.bound) << ' ';
          print(os, x.arg, PUnary);
        } else if constexpr (std::is_same_v<T, BNext>) {
          os << "X<=" << boundText(x.bound) << ' ';
          print(os, x.arg, PUnary);
        } else if constexpr (std::is_same_v<T, BUntil>) {
          os << '(';
          print(os, x.lhs, PImp);
          os << " U<=" << boundText(x.bound) << ' ';
          print(os, x.rhs, PImp);
          os << ')';
        } else {
          static_assert(std::is_same_v<T, BWeakUntil>);
          os << '(';
          print(os, x.lhs, PImp);
          os << " W<=" << boundText(x.bound) << ' ';
          print(os, x.rhs, PImp);
          os << ')';
        }
      },
      f->node);
}

}  // namespace

std::string printBltl(const BltlPtr& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

using detail::Cursor;
using detail::Tok;

BltlPtr parseFormula(Cursor& cur, const TimeScale& scale);

double parseBound(Cursor& cur, const TimeScale& scale) {
  cur.expectPunct("<=");
  if (cur.tryIdent("end")) return std::numeric_limits<double>::infinity();
  return detail::parseTimeValueLenient(cur, scale);
}

CmpOp parseRel(Cursor& cur) {
  if (cur.tryPunct("<=")) return CmpOp::Le;
  if (cur.tryPunct(">=")) return CmpOp::Ge;
  if (cur.tryPunct("<")) return CmpOp::Lt;
  if (cur.tryPunct(">")) return CmpOp::Gt;
  if (cur.tryPunct("=")) return CmpOp::Eq;
  cur.fail("expected a comparison operator");
}

OclExprPtr parseBraced(Cursor& cur, const TimeScale& scale) {
  cur.expectPunct("{");
  OclExprPtr e = detail::parseOclExpression(cur, scale);
  cur.expectPunct("}");
  return e;
}

BltlPtr parseUnary(Cursor& cur, const TimeScale& scale) {
  if (cur.tryIdent("true")) return bltlTrue();
  if (cur.tryIdent("false")) return bltlFalse();
  if (cur.tryIdent("not")) return bltlNot(parseUnary(cur, scale));
  if (cur.peek().isIdent("G")) {
    cur.next();
    double b = parseBound(cur, scale);
    return bltlGlobally(b, parseUnary(cur, scale));
  }
  if (cur.peek().isIdent("F")) {
    cur.next();
    double b = parseBound(cur, scale);
    return bltlFinally(b, parseUnary(cur, scale));
  }
  if (cur.peek().isIdent("X")) {
    cur.next();
    double b = parseBound(cur, scale);
    return bltlNext(b, parseUnary(cur, scale));
  }
  if (cur.peek().isIdent("occ")) {
    cur.next();
    cur.expectPunct("(");
    cur.expectPunct("[");
    OccPred occ;
    occ.prop = detail::parseOclExpression(cur, scale);
    cur.expectPunct("]");
    cur.expectPunct(",");
    occ.lo = detail::parseTimeValueLenient(cur, scale);
    cur.expectPunct(",");
    occ.hi = detail::parseTimeValueLenient(cur, scale);
    cur.expectPunct(")");
    occ.rel = parseRel(cur);
    occ.count = static_cast<long long>(cur.expectNumber("an occurrence count"));
    return makeBltl({std::move(occ)});
  }
  if (cur.peek().isIdent("run")) {
    cur.next();
    cur.expectPunct("(");
    OclExprPtr body = detail::parseOclExpression(cur, scale);
    cur.expectPunct(")");
    const auto* cmp = std::get_if<Compare>(&body->node);
    if (!cmp) cur.fail("run(...) needs a comparison");
    AggPred agg;
    agg.lhs = cmp->lhs;
    agg.rel = cmp->op;
    agg.rhs = cmp->rhs;
    return makeBltl({std::move(agg)});
  }
  if (cur.peek().isIdent("split")) {
    cur.next();
    cur.expectPunct("(");
    SplitPred sp;
    cur.expectPunct("[");
    sp.subject = detail::parseOclExpression(cur, scale);
    cur.expectPunct("]");
    cur.expectPunct(",");
    cur.expectPunct("[");
    sp.first = detail::parseOclExpression(cur, scale);
    cur.expectPunct("]");
    cur.expectPunct(",");
    cur.expectPunct("[");
    sp.second = detail::parseOclExpression(cur, scale);
    cur.expectPunct("]");
    cur.expectPunct(",");
    sp.lo = detail::parseTimeValueLenient(cur, scale);
    cur.expectPunct(",");
    sp.hi = detail::parseTimeValueLenient(cur, scale);
    cur.expectPunct(")");
    return makeBltl({std::move(sp)});
  }
  if (cur.peek().isPunct("{")) {
    return bltlState(parseBraced(cur, scale));
  }
  if (cur.tryPunct("(")) {
    BltlPtr first = parseFormula(cur, scale);
    if (cur.peek().isIdent("U") || cur.peek().isIdent("W")) {
      bool weak = cur.next().text == "W";
      double b = parseBound(cur, scale);
      BltlPtr second = parseFormula(cur, scale);
      cur.expectPunct(")");
      return weak ? bltlWeakUntil(b, first, second) : bltlUntil(b, first, second);
    }
    cur.expectPunct(")");
    return first;
  }
  cur.fail("expected a formula");
}

BltlPtr parseAndExpr(Cursor& cur, const TimeScale& scale) {
  BltlPtr first = parseUnary(cur, scale);
  if (!cur.peek().isIdent("and")) return first;
  std::vector<BltlPtr> args{std::move(first)};
  while (cur.tryIdent("and")) args.push_back(parseUnary(cur, scale));
  return bltlAnd(std::move(args));
}

BltlPtr parseOrExpr(Cursor& cur, const TimeScale& scale) {
  BltlPtr first = parseAndExpr(cur, scale);
  if (!cur.peek().isIdent("or")) return first;
  std::vector<BltlPtr> args{std::move(first)};
  while (cur.tryIdent("or")) args.push_back(parseAndExpr(cur, scale));
  return bltlOr(std::move(args));
}

BltlPtr parseFormula(Cursor& cur, const TimeScale& scale) {
  BltlPtr lhs = parseOrExpr(cur, scale);
  if (cur.tryPunct("=>")) {
    return bltlImplies(std::move(lhs), parseFormula(cur, scale));
  }
  return lhs;
}

}  // namespace

BltlPtr parseBltl(std::string_view text, const TimeScale& scale) {
  Cursor cur(detail::tokenize(text));
  BltlPtr f = parseFormula(cur, scale);
  if (!cur.atEnd()) cur.fail("trailing input after formula");
  return f;
}

}  // namespace sosmc
