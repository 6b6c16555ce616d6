#include "sosmc/gcsl_parser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lexer.hpp"
#include "parse_internal.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/value.hpp"

namespace sosmc {

using detail::Cursor;
using detail::Tok;

PropertyPtr makeProperty(PropertyExpr p) {
  return std::make_shared<const PropertyExpr>(std::move(p));
}

namespace {

// ---------------------------------------------------------------------------
// OCL expression grammar (precedence climbing)
// ---------------------------------------------------------------------------

OclExprPtr parseExpr(Cursor& cur, const TimeScale& scale);

bool isRunAggHead(const Cursor& cur, std::string_view name) {
  return cur.peek().isIdent(name) && cur.peek(1).isPunct("(");
}

OclExprPtr parsePrimary(Cursor& cur, const TimeScale& scale) {
  if (cur.tryIdent("true")) return oclBool(true);
  if (cur.tryIdent("false")) return oclBool(false);
  if (cur.peek().kind == Tok::Number) {
    const auto& t = cur.next();
    return oclNumber(t.number, t.integral);
  }
  if (cur.tryPunct("(")) {
    OclExprPtr e = parseExpr(cur, scale);
    cur.expectPunct(")");
    return e;
  }
  for (auto [name, agg] : {std::pair{"mean", PathAgg::Mean},
                           std::pair{"sum", PathAgg::Sum},
                           std::pair{"prod", PathAgg::Prod}}) {
    if (isRunAggHead(cur, name)) {
      cur.next();
      cur.expectPunct("(");
      OclExprPtr arg = parseExpr(cur, scale);
      cur.expectPunct(")");
      return makeOcl({RunAggExpr{agg, std::move(arg)}});
    }
  }
  if (isRunAggHead(cur, "at")) {
    cur.next();
    cur.expectPunct("(");
    OclExprPtr arg = parseExpr(cur, scale);
    cur.expectPunct(",");
    double t = detail::parseTimeValue(cur, scale);
    cur.expectPunct(")");
    return makeOcl({AtExpr{std::move(arg), t}});
  }
  if (cur.peek().kind != Tok::Ident) cur.fail("expected an expression");

  PathRef path;
  path.steps.push_back(cur.next().text);
  while (cur.peek().isPunct(".") && cur.peek(1).kind == Tok::Ident) {
    cur.next();
    path.steps.push_back(cur.next().text);
  }
  if (cur.tryPunct("->")) {
    if (cur.tryIdent("size")) {
      cur.expectPunct("(");
      cur.expectPunct(")");
      return makeOcl({CollectionOp{std::move(path), CollOp::Size}});
    }
    if (cur.tryIdent("sum")) {
      cur.expectPunct("(");
      cur.expectPunct(")");
      return makeOcl({CollectionOp{std::move(path), CollOp::Sum}});
    }
    bool forAll = false;
    if (cur.tryIdent("forAll") || cur.tryIdent("forall")) {
      forAll = true;
    } else if (!cur.tryIdent("exists")) {
      cur.fail("expected size(), sum(), forAll(...) or exists(...) after '->'");
    }
    cur.expectPunct("(");
    std::string var = cur.expectName("a bound variable");
    cur.expectPunct("|");
    OclExprPtr body = parseExpr(cur, scale);
    cur.expectPunct(")");
    return makeOcl({QuantExpr{forAll, std::move(path), std::move(var), std::move(body)}});
  }
  return makeOcl({std::move(path)});
}

OclExprPtr parseUnary(Cursor& cur, const TimeScale& scale) {
  if (cur.tryIdent("not")) return oclNot(parseUnary(cur, scale));
  // Negative numeric literals only; there is no general unary minus.
  if (cur.peek().isPunct("-") && cur.peek(1).kind == Tok::Number) {
    cur.next();
    const auto& t = cur.next();
    return oclNumber(-t.number, t.integral);
  }
  return parsePrimary(cur, scale);
}

OclExprPtr parseMul(Cursor& cur, const TimeScale& scale) {
  OclExprPtr lhs = parseUnary(cur, scale);
  while (true) {
    ArithOp op;
    if (cur.tryPunct("*")) {
      op = ArithOp::Mul;
    } else if (cur.tryPunct("/")) {
      op = ArithOp::Div;
    } else {
      return lhs;
    }
    lhs = makeOcl({Arith{op, std::move(lhs), parseUnary(cur, scale)}});
  }
}

OclExprPtr parseAdd(Cursor& cur, const TimeScale& scale) {
  OclExprPtr lhs = parseMul(cur, scale);
  while (true) {
    ArithOp op;
    if (cur.tryPunct("+")) {
      op = ArithOp::Add;
    } else if (cur.tryPunct("-")) {
      op = ArithOp::Sub;
    } else {
      return lhs;
    }
    lhs = makeOcl({Arith{op, std::move(lhs), parseMul(cur, scale)}});
  }
}

OclExprPtr parseCompare(Cursor& cur, const TimeScale& scale) {
  OclExprPtr lhs = parseAdd(cur, scale);
  CmpOp op;
  if (cur.tryPunct("<=")) {
    op = CmpOp::Le;
  } else if (cur.tryPunct(">=")) {
    op = CmpOp::Ge;
  } else if (cur.tryPunct("<")) {
    op = CmpOp::Lt;
  } else if (cur.tryPunct(">")) {
    op = CmpOp::Gt;
  } else if (cur.tryPunct("=")) {
    op = CmpOp::Eq;
  } else {
    return lhs;
  }
  return oclCompare(op, std::move(lhs), parseAdd(cur, scale));
}

OclExprPtr parseAnd(Cursor& cur, const TimeScale& scale) {
  OclExprPtr first = parseCompare(cur, scale);
  if (!cur.peek().isIdent("and")) return first;
  std::vector<OclExprPtr> args{std::move(first)};
  while (cur.tryIdent("and")) args.push_back(parseCompare(cur, scale));
  return oclAnd(std::move(args));
}

OclExprPtr parseOr(Cursor& cur, const TimeScale& scale) {
  OclExprPtr first = parseAnd(cur, scale);
  if (!cur.peek().isIdent("or")) return first;
  std::vector<OclExprPtr> args{std::move(first)};
  while (cur.tryIdent("or")) args.push_back(parseAnd(cur, scale));
  return oclOr(std::move(args));
}

OclExprPtr parseExpr(Cursor& cur, const TimeScale& scale) {
  OclExprPtr lhs = parseOr(cur, scale);
  if (cur.tryIdent("implies")) {
    return oclImplies(std::move(lhs), parseExpr(cur, scale));  // right assoc
  }
  return lhs;
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

OclExprPtr parseSlot(Cursor& cur, const TimeScale& scale) {
  cur.expectPunct("[");
  OclExprPtr e = parseExpr(cur, scale);
  cur.expectPunct("]");
  return e;
}

long long parseCount(Cursor& cur) {
  cur.expectPunct("[");
  const auto& t = cur.peek();
  if (t.kind != Tok::Number || !t.integral || t.number < 1) {
    cur.fail("expected a positive occurrence count");
  }
  long long n = static_cast<long long>(cur.next().number);
  cur.expectPunct("]");
  return n;
}

bool atPatternStart(const Cursor& cur) {
  const auto& t = cur.peek();
  return t.isIdent("whenever") || t.isIdent("Whenever") || t.isIdent("always") ||
         t.isPunct("[");
}

PatternExpr parsePatternExpr(Cursor& cur, const TimeScale& scale) {
  PatternExpr p;
  if (cur.tryIdent("whenever") || cur.tryIdent("Whenever")) {
    p.prop = parseSlot(cur, scale);
    cur.expectIdent("occurs");
    cur.tryPunct(",");
    p.prop1 = parseSlot(cur, scale);
    if (cur.tryIdent("holds")) {
      if (cur.tryIdent("during")) {
        cur.expectIdent("following");
        p.kind = PatternKind::WheneverHoldsDuring;
        p.intervals.push_back(detail::parseInterval(cur, scale));
      } else {
        p.kind = PatternKind::WheneverHolds;
      }
    } else if (cur.tryIdent("implies")) {
      p.kind = PatternKind::WheneverImpliesDuring;
      p.prop2 = parseSlot(cur, scale);
      cur.expectIdent("during");
      cur.expectIdent("following");
      p.intervals.push_back(detail::parseInterval(cur, scale));
    } else if (cur.tryIdent("does")) {
      cur.expectIdent("not");
      cur.expectIdent("occur");
      cur.expectIdent("during");
      cur.expectIdent("following");
      p.kind = PatternKind::WheneverNotDuring;
      p.intervals.push_back(detail::parseInterval(cur, scale));
    } else if (cur.tryIdent("occurs")) {
      cur.expectIdent("within");
      p.kind = PatternKind::WheneverWithin;
      p.intervals.push_back(detail::parseInterval(cur, scale));
    } else {
      cur.fail("expected 'holds', 'implies', 'does not occur' or 'occurs within'");
    }
    return p;
  }
  if (cur.tryIdent("always")) {
    p.kind = PatternKind::Always;
    p.prop = parseSlot(cur, scale);
    return p;
  }

  // Forms opening with a bracketed proposition.
  OclExprPtr first = parseSlot(cur, scale);
  if (cur.tryIdent("implies")) {
    OclExprPtr second = parseSlot(cur, scale);
    if (cur.tryIdent("holds")) {
      cur.expectIdent("forever");
      p.kind = PatternKind::ImpliesForever;
      p.prop = std::move(first);
      p.prop1 = std::move(second);
      return p;
    }
    cur.expectIdent("during");
    cur.expectIdent("following");
    // Specialized surface of the whenever/implies pattern with a true trigger.
    p.kind = PatternKind::WheneverImpliesDuring;
    p.prop = oclBool(true);
    p.prop1 = std::move(first);
    p.prop2 = std::move(second);
    p.intervals.push_back(detail::parseInterval(cur, scale));
    return p;
  }
  if (cur.tryIdent("during")) {
    TimeInterval full = detail::parseInterval(cur, scale);
    if (cur.tryIdent("raises")) {
      p.kind = PatternKind::DuringRaises;
      p.prop1 = std::move(first);
      p.prop2 = parseSlot(cur, scale);
      p.intervals.push_back(full);
      return p;
    }
    cur.expectIdent("implies");
    p.kind = PatternKind::DuringImpliesThen;
    p.prop = std::move(first);
    p.prop1 = parseSlot(cur, scale);
    cur.expectIdent("during");
    TimeInterval firstHalf = detail::parseInterval(cur, scale);
    cur.expectIdent("then");
    p.prop2 = parseSlot(cur, scale);
    cur.expectIdent("during");
    TimeInterval secondHalf = detail::parseInterval(cur, scale);
    p.intervals = {full, firstHalf, secondHalf};
    return p;
  }
  if (cur.tryIdent("occurs")) {
    if (cur.tryIdent("at")) {
      cur.expectIdent("most");
      p.kind = PatternKind::OccursAtMost;
      p.prop = std::move(first);
      p.count = parseCount(cur);
      cur.expectIdent("times");
      cur.expectIdent("during");
      p.intervals.push_back(detail::parseInterval(cur, scale));
      return p;
    }
    p.kind = PatternKind::OccursRaises;
    p.prop = std::move(first);
    p.count = parseCount(cur);
    cur.expectIdent("times");
    cur.expectIdent("during");
    p.intervals.push_back(detail::parseInterval(cur, scale));
    cur.expectIdent("raises");
    p.prop1 = parseSlot(cur, scale);
    return p;
  }
  cur.fail("expected 'implies', 'during' or 'occurs' after the proposition");
}

// ---------------------------------------------------------------------------
// Properties and contracts
// ---------------------------------------------------------------------------

bool containsPattern(const PropertyPtr& p) {
  if (!p) return false;
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PatternExpr>) {
          return true;
        } else if constexpr (std::is_same_v<T, Quantified>) {
          return containsPattern(x.body);
        } else if constexpr (std::is_same_v<T, PropConnective>) {
          return std::any_of(x.parts.begin(), x.parts.end(),
                             [](const PropertyPtr& q) { return containsPattern(q); });
        } else {
          return false;
        }
      },
      p->node);
}

bool propertyEndsHere(const Cursor& cur) {
  const auto& t = cur.peek();
  return t.kind == Tok::End || t.isPunct(")") || t.isIdent("Goal") ||
         t.isIdent("Confidence") || t.isIdent("Assumption");
}

PropertyPtr parsePropertyExpr(Cursor& cur, const TimeScale& scale);

/// Attempts "path ->forAll( var | property )" whose body contains a
/// behavioral pattern. Returns null (cursor restored) when the text is not
/// of that shape; plain OCL quantification stays an OCL expression.
PropertyPtr tryQuantifiedProperty(Cursor& cur, const TimeScale& scale) {
  std::size_t mark = cur.save();
  try {
    if (cur.peek().kind != Tok::Ident) return nullptr;
    PathRef path;
    path.steps.push_back(cur.next().text);
    while (cur.peek().isPunct(".") && cur.peek(1).kind == Tok::Ident) {
      cur.next();
      path.steps.push_back(cur.next().text);
    }
    if (!cur.tryPunct("->")) {
      cur.restore(mark);
      return nullptr;
    }
    bool forAll = false;
    if (cur.tryIdent("forAll") || cur.tryIdent("forall")) {
      forAll = true;
    } else if (!cur.tryIdent("exists")) {
      cur.restore(mark);
      return nullptr;
    }
    cur.expectPunct("(");
    std::string var = cur.expectName("a bound variable");
    cur.expectPunct("|");
    PropertyPtr body = parsePropertyExpr(cur, scale);
    cur.expectPunct(")");
    if (!containsPattern(body) || !propertyEndsHere(cur)) {
      cur.restore(mark);
      return nullptr;
    }
    return makeProperty(
        {Quantified{forAll, std::move(path), std::move(var), std::move(body)}});
  } catch (const ParseError&) {
    cur.restore(mark);
    return nullptr;
  }
}

PropertyPtr parsePropertyExpr(Cursor& cur, const TimeScale& scale) {
  if (atPatternStart(cur)) {
    return makeProperty({parsePatternExpr(cur, scale)});
  }
  if (PropertyPtr q = tryQuantifiedProperty(cur, scale)) return q;
  return makeProperty({parseExpr(cur, scale)});
}

// ---------------------------------------------------------------------------
// Post-parse validation: binder scoping, nesting depth, run operators in
// pattern slots, threshold range.
// ---------------------------------------------------------------------------

void checkOclBinders(const OclExprPtr& e, std::vector<std::string>& scope) {
  if (!e) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QuantExpr>) {
          if (std::find(scope.begin(), scope.end(), x.var) != scope.end()) {
            throw SemanticError("bound variable '" + x.var + "' reused in a nested quantifier");
          }
          scope.push_back(x.var);
          checkOclBinders(x.body, scope);
          scope.pop_back();
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          for (const auto& a : x.args) checkOclBinders(a, scope);
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          checkOclBinders(x.arg, scope);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          checkOclBinders(x.lhs, scope);
          checkOclBinders(x.rhs, scope);
        } else if constexpr (std::is_same_v<T, Compare>) {
          checkOclBinders(x.lhs, scope);
          checkOclBinders(x.rhs, scope);
        } else if constexpr (std::is_same_v<T, Arith>) {
          checkOclBinders(x.lhs, scope);
          checkOclBinders(x.rhs, scope);
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          checkOclBinders(x.arg, scope);
        } else if constexpr (std::is_same_v<T, AtExpr>) {
          checkOclBinders(x.arg, scope);
        }
      },
      e->node);
}

void checkSlot(const OclExprPtr& slot, std::vector<std::string>& scope) {
  if (!slot) return;
  checkOclBinders(slot, scope);
  if (maxRunOperatorsPerComparison(slot) > 1) {
    throw SemanticError(
        "run operator (mean/sum/prod/at) used more than once per comparison "
        "inside a pattern proposition");
  }
}

void validatePattern(const PatternExpr& p, std::vector<std::string>& scope) {
  checkSlot(p.prop, scope);
  checkSlot(p.prop1, scope);
  checkSlot(p.prop2, scope);
}

void validateProperty(const PropertyPtr& prop, std::vector<std::string>& scope,
                      int depth) {
  if (!prop) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          if (depth + 1 > 2) {
            throw SemanticError("quantifier nesting depth exceeds the limit of 2");
          }
          if (std::find(scope.begin(), scope.end(), x.var) != scope.end()) {
            throw SemanticError("bound variable '" + x.var +
                                "' reused in a nested quantifier");
          }
          scope.push_back(x.var);
          validateProperty(x.body, scope, depth + 1);
          scope.pop_back();
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          validatePattern(x, scope);
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          checkOclBinders(x, scope);
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          for (const auto& part : x.parts) validateProperty(part, scope, depth);
        }
      },
      prop->node);
}

double parseThreshold(Cursor& cur) {
  if (cur.peek().kind != Tok::Number) cur.fail("expected a confidence threshold");
  double v = cur.next().number;
  if (cur.tryPunct("%")) v /= 100.0;
  if (!(v > 0 && v <= 1)) {
    throw SemanticError("confidence must lie in (0, 1], got " + formatNumber(v));
  }
  return v;
}

GcslContract parseContractDecl(Cursor& cur, const TimeScale& scale) {
  GcslContract c;
  while (cur.peek().kind == Tok::Ident && !cur.peek().isIdent("contract")) {
    c.viewpoints.push_back(cur.next().text);
  }
  if (c.viewpoints.empty()) cur.fail("expected at least one viewpoint identifier");
  cur.expectIdent("contract");
  c.name = cur.expectName("contract name");
  if (cur.tryIdent("Assumption")) {
    cur.expectPunct(":");
    c.assumption = parsePropertyExpr(cur, scale);
  }
  cur.expectIdent("Goal");
  cur.expectPunct(":");
  c.goal = parsePropertyExpr(cur, scale);
  cur.expectIdent("Confidence");
  cur.expectPunct(":");
  c.confidence = parseThreshold(cur);

  std::vector<std::string> scope;
  validateProperty(c.assumption, scope, 0);
  validateProperty(c.goal, scope, 0);
  return c;
}

}  // namespace

namespace detail {

OclExprPtr parseOclExpression(Cursor& cur, const TimeScale& scale) {
  return parseExpr(cur, scale);
}

double parseTimeValue(Cursor& cur, const TimeScale& scale) {
  if (cur.tryPunct("+")) {
    cur.expectIdent("inf");
    return std::numeric_limits<double>::infinity();
  }
  if (cur.tryIdent("inf")) return std::numeric_limits<double>::infinity();
  double v = cur.expectNumber("a time value");
  if (cur.peek().kind == Tok::Ident) {
    std::string unit = cur.next().text;
    if (!isTimeUnit(unit)) cur.fail("unknown time unit '" + unit + "'");
    return convertToBase(v, unit, scale);
  }
  return v;
}

double parseTimeValueLenient(Cursor& cur, const TimeScale& scale) {
  if (cur.tryPunct("+")) {
    cur.expectIdent("inf");
    return std::numeric_limits<double>::infinity();
  }
  if (cur.peek().isIdent("inf")) {
    cur.next();
    return std::numeric_limits<double>::infinity();
  }
  double v = cur.expectNumber("a time value");
  if (cur.peek().kind == Tok::Ident && isTimeUnit(cur.peek().text)) {
    return convertToBase(v, cur.next().text, scale);
  }
  return v;
}

TimeInterval parseInterval(Cursor& cur, const TimeScale& scale) {
  TimeInterval iv;
  if (cur.tryPunct("[")) {
    iv.loClosed = true;
  } else if (cur.tryPunct("(")) {
    iv.loClosed = false;
  } else {
    cur.fail("expected an interval");
  }
  double first = parseTimeValue(cur, scale);
  bool twoBounds = cur.tryPunct("-");
  double second = twoBounds ? parseTimeValue(cur, scale) : first;
  if (!twoBounds) {
    iv.lo = 0;  // "[b]" abbreviates [0, b]
  } else {
    iv.lo = first;
  }
  if (std::isinf(second)) {
    iv.hiInfinite = true;
    iv.hi = std::numeric_limits<double>::infinity();
  } else {
    iv.hi = second;
  }
  if (cur.tryPunct("]")) {
    iv.hiClosed = true;
  } else if (cur.tryPunct(")")) {
    iv.hiClosed = false;
  } else {
    cur.fail("expected ']' or ')'");
  }
  if (std::isinf(iv.lo)) throw SemanticError("interval lower bound cannot be infinite");
  if (!iv.hiInfinite && iv.lo > iv.hi) {
    throw SemanticError("interval with lo > hi (" + formatNumber(iv.lo) + " > " +
                        formatNumber(iv.hi) + ")");
  }
  return iv;
}

}  // namespace detail

std::vector<GcslContract> parseContracts(std::string_view text, const TimeScale& scale) {
  Cursor cur(detail::tokenize(text));
  std::vector<GcslContract> out;
  while (!cur.atEnd()) out.push_back(parseContractDecl(cur, scale));
  if (out.empty()) {
    throw ParseError("document contains no contracts", 1, 1);
  }
  return out;
}

PatternExpr parsePattern(std::string_view text, const TimeScale& scale) {
  Cursor cur(detail::tokenize(text));
  PatternExpr p = parsePatternExpr(cur, scale);
  if (!cur.atEnd()) cur.fail("trailing input after pattern");
  std::vector<std::string> scope;
  validatePattern(p, scope);
  return p;
}

PropertyPtr parseProperty(std::string_view text, const TimeScale& scale) {
  Cursor cur(detail::tokenize(text));
  PropertyPtr p = parsePropertyExpr(cur, scale);
  if (!cur.atEnd()) cur.fail("trailing input after property");
  std::vector<std::string> scope;
  validateProperty(p, scope, 0);
  return p;
}

OclExprPtr parseOclExpr(std::string_view text, const TimeScale& scale) {
  Cursor cur(detail::tokenize(text));
  OclExprPtr e = parseExpr(cur, scale);
  if (!cur.atEnd()) cur.fail("trailing input after expression");
  return e;
}

}  // namespace sosmc
