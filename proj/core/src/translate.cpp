#include "sosmc/translate.hpp"

#include <cmath>
#include <limits>

#include "sosmc/errors.hpp"

namespace sosmc {

namespace {

std::string joinSteps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i];
  }
  return out;
}

/// Members of a collection path rooted at SoS or at an instance,
/// navigating singleton refs in between.
std::vector<std::string> resolveCollection(const SosModel& model,
                                           const std::vector<std::string>& steps) {
  if (steps.size() < 2) {
    throw SemanticError("unresolved collection '" + joinSteps(steps) + "'");
  }
  std::vector<std::string> current;
  std::size_t next = 1;
  if (steps.front() == "SoS") {
    const auto* coll = model.collection(steps[1]);
    if (!coll) {
      throw SemanticError("unresolved collection 'SoS." + steps[1] + "'");
    }
    current = *coll;
    next = 2;
  } else if (model.instance(steps.front())) {
    current = {steps.front()};
  } else {
    throw SemanticError("unresolved collection '" + joinSteps(steps) +
                        "' (unknown root '" + steps.front() + "')");
  }
  for (std::size_t i = next; i < steps.size(); ++i) {
    if (current.size() != 1) {
      throw SemanticError("cannot navigate '" + steps[i] + "' in '" +
                          joinSteps(steps) + "': not a single instance");
    }
    const auto* targets = model.instanceRef(current.front(), steps[i]);
    if (!targets) {
      throw SemanticError("unresolved collection '" + joinSteps(steps) +
                          "' (no ref '" + steps[i] + "' on '" + current.front() + "')");
    }
    current = *targets;
  }
  if (next == 1 && steps.size() == 1) {
    throw SemanticError("'" + joinSteps(steps) + "' is not a collection");
  }
  return current;
}

}  // namespace

OclExprPtr unfoldOcl(const OclExprPtr& expr, const SosModel& model) {
  if (!expr) return expr;
  return std::visit(
      [&](const auto& x) -> OclExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QuantExpr>) {
          std::vector<std::string> members = resolveCollection(model, x.coll.steps);
          std::vector<OclExprPtr> parts;
          parts.reserve(members.size());
          for (const auto& id : members) {
            parts.push_back(unfoldOcl(substituteVar(x.body, x.var, id), model));
          }
          if (parts.empty()) return oclBool(x.forAll);
          return x.forAll ? oclAnd(std::move(parts)) : oclOr(std::move(parts));
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          NaryBool out{x.op, {}};
          out.args.reserve(x.args.size());
          for (const auto& a : x.args) out.args.push_back(unfoldOcl(a, model));
          return makeOcl({std::move(out)});
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return oclNot(unfoldOcl(x.arg, model));
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return oclImplies(unfoldOcl(x.lhs, model), unfoldOcl(x.rhs, model));
        } else if constexpr (std::is_same_v<T, Compare>) {
          return oclCompare(x.op, unfoldOcl(x.lhs, model), unfoldOcl(x.rhs, model));
        } else if constexpr (std::is_same_v<T, Arith>) {
          return makeOcl({Arith{x.op, unfoldOcl(x.lhs, model), unfoldOcl(x.rhs, model)}});
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          return makeOcl({RunAggExpr{x.op, unfoldOcl(x.arg, model)}});
        } else if constexpr (std::is_same_v<T, AtExpr>) {
          return makeOcl({AtExpr{unfoldOcl(x.arg, model), x.time}});
        } else {
          return expr;  // literals, paths, collection ops
        }
      },
      expr->node);
}

namespace {

PatternExpr substitutePattern(const PatternExpr& p, const std::string& var,
                              const std::string& id) {
  PatternExpr out = p;
  out.prop = substituteVar(p.prop, var, id);
  out.prop1 = substituteVar(p.prop1, var, id);
  out.prop2 = substituteVar(p.prop2, var, id);
  return out;
}

PropertyPtr substituteProperty(const PropertyPtr& prop, const std::string& var,
                               const std::string& id) {
  if (!prop) return prop;
  return std::visit(
      [&](const auto& x) -> PropertyPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          Quantified out = x;
          if (!out.collection.steps.empty() && out.collection.steps.front() == var) {
            out.collection.steps.front() = id;
          }
          if (x.var != var) out.body = substituteProperty(x.body, var, id);
          return makeProperty({std::move(out)});
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          return makeProperty({substitutePattern(x, var, id)});
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          return makeProperty({substituteVar(x, var, id)});
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          PropConnective out{x.conjunction, {}};
          out.parts.reserve(x.parts.size());
          for (const auto& part : x.parts) {
            out.parts.push_back(substituteProperty(part, var, id));
          }
          return makeProperty({std::move(out)});
        }
      },
      prop->node);
}

PatternExpr unfoldPattern(const PatternExpr& p, const SosModel& model) {
  PatternExpr out = p;
  out.prop = unfoldOcl(p.prop, model);
  out.prop1 = unfoldOcl(p.prop1, model);
  out.prop2 = unfoldOcl(p.prop2, model);
  return out;
}

PropertyPtr unfoldAtDepth(const PropertyPtr& prop, const SosModel& model, int depth) {
  if (!prop) return prop;
  return std::visit(
      [&](const auto& x) -> PropertyPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          if (depth + 1 > 2) {
            throw SemanticError("quantifier nesting depth exceeds the limit of 2");
          }
          std::vector<std::string> members =
              resolveCollection(model, x.collection.steps);
          PropConnective conn{x.forAll, {}};
          conn.parts.reserve(members.size());
          for (const auto& id : members) {
            conn.parts.push_back(
                unfoldAtDepth(substituteProperty(x.body, x.var, id), model, depth + 1));
          }
          if (conn.parts.empty()) {
            // Empty conjunction is true, empty disjunction is false.
            return makeProperty({oclBool(x.forAll)});
          }
          return makeProperty({std::move(conn)});
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          return makeProperty({unfoldPattern(x, model)});
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          return makeProperty({unfoldOcl(x, model)});
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          PropConnective out{x.conjunction, {}};
          out.parts.reserve(x.parts.size());
          for (const auto& part : x.parts) {
            out.parts.push_back(unfoldAtDepth(part, model, depth));
          }
          return makeProperty({std::move(out)});
        }
      },
      prop->node);
}

}  // namespace

PropertyPtr unfold(const PropertyPtr& property, const SosModel& model) {
  return unfoldAtDepth(property, model, 0);
}

namespace {

[[noreturn]] void consistencyError(const char* condition, double a, double b, double k,
                                   double c = std::nan("")) {
  std::string detail = "a=" + formatNumber(a) + ", b=" + formatNumber(b);
  if (!std::isnan(c)) detail += ", c=" + formatNumber(c);
  detail += ", k=" + formatNumber(k);
  throw SemanticError("pattern consistency condition violated: " +
                      std::string(condition) + " (" + detail + ")");
}

/// Turns a closed OCL proposition into a formula leaf. Comparisons that
/// involve run operators become run predicates; boolean structure above
/// them becomes formula structure.
BltlPtr propToFormula(const OclExprPtr& e) {
  if (!containsRunOperator(e)) return bltlState(e);
  return std::visit(
      [&](const auto& x) -> BltlPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NaryBool>) {
          std::vector<BltlPtr> parts;
          parts.reserve(x.args.size());
          for (const auto& a : x.args) parts.push_back(propToFormula(a));
          return x.op == BoolOp::And ? bltlAnd(std::move(parts))
                                     : bltlOr(std::move(parts));
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return bltlNot(propToFormula(x.arg));
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return bltlImplies(propToFormula(x.lhs), propToFormula(x.rhs));
        } else if constexpr (std::is_same_v<T, Compare>) {
          return makeBltl({AggPred{x.lhs, x.op, x.rhs, {}}});
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          throw SemanticError(
              "run operator under a quantifier that cannot be unfolded");
        } else {
          throw SemanticError("run operator must appear inside a comparison");
        }
      },
      e->node);
}

void requireStateOnly(const OclExprPtr& e, const char* where) {
  if (containsRunOperator(e)) {
    throw SemanticError(std::string(where) +
                        " must be a state proposition without run operators");
  }
}

struct IntervalBounds {
  double a = 0;
  double b = 0;
};

IntervalBounds boundsOf(const TimeInterval& iv, double k) {
  IntervalBounds out;
  out.a = iv.lo;
  out.b = iv.hiInfinite ? k : iv.hi;  // horizon stands in for the open end
  return out;
}

}  // namespace

BltlPtr translatePattern(const PatternExpr& p, double k, const TranslateOptions& options) {
  if (!(k > 0)) throw SemanticError("time bound k must be positive");

  auto state = [](const OclExprPtr& e) { return propToFormula(e); };

  switch (p.kind) {
    case PatternKind::Always:
      return bltlGlobally(k, state(p.prop));

    case PatternKind::WheneverHolds:
      return bltlGlobally(k, bltlImplies(state(p.prop), state(p.prop1)));

    case PatternKind::ImpliesForever: {
      // Inner bound runs to the end of the trace.
      double inf = std::numeric_limits<double>::infinity();
      return bltlGlobally(
          k, bltlImplies(state(p.prop), bltlGlobally(inf, state(p.prop1))));
    }

    case PatternKind::WheneverHoldsDuring: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      return bltlGlobally(
          k - b, bltlImplies(state(p.prop),
                             bltlNext(a, bltlGlobally(b - a, state(p.prop1)))));
    }

    case PatternKind::WheneverImpliesDuring: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      return bltlGlobally(
          k - b,
          bltlImplies(state(p.prop),
                      bltlNext(a, bltlGlobally(b - a, bltlImplies(state(p.prop1),
                                                                  state(p.prop2))))));
    }

    case PatternKind::WheneverNotDuring: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      return bltlGlobally(
          k - b, bltlImplies(state(p.prop),
                             bltlNext(a, bltlGlobally(b - a, bltlNot(state(p.prop1))))));
    }

    case PatternKind::WheneverWithin: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      return bltlGlobally(
          k - b, bltlImplies(state(p.prop),
                             bltlNext(a, bltlFinally(b - a, state(p.prop1)))));
    }

    case PatternKind::OccursRaises: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      requireStateOnly(p.prop, "the counted proposition");
      OccPred occ;
      occ.prop = p.prop;
      occ.lo = a;
      occ.hi = b;
      occ.rel = CmpOp::Ge;
      occ.count = p.count;
      return bltlImplies(makeBltl({std::move(occ)}),
                         bltlNext(b, bltlFinally(k - b, state(p.prop1))));
    }

    case PatternKind::OccursAtMost: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b)) consistencyError("a <= b", a, b, k);
      requireStateOnly(p.prop, "the counted proposition");
      OccPred occ;
      occ.prop = p.prop;
      occ.lo = a;
      occ.hi = b;
      occ.rel = CmpOp::Le;
      occ.count = p.count;
      return makeBltl({std::move(occ)});
    }

    case PatternKind::DuringRaises: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      if (!(a <= b && b <= k)) consistencyError("a <= b <= k", a, b, k);
      return bltlImplies(bltlNext(a, bltlGlobally(b - a, state(p.prop1))),
                         bltlNext(b, state(p.prop2)));
    }

    case PatternKind::DuringImpliesThen: {
      auto [a, b] = boundsOf(p.intervals[0], k);
      auto [a2, c] = boundsOf(p.intervals[1], k);
      auto [c2, b2] = boundsOf(p.intervals[2], k);
      if (a2 != a || b2 != b || c2 != c) {
        throw SemanticError(
            "pattern intervals must share their bounds: [a - b], [a - c], [c - b]");
      }
      if (!(a <= c && c <= b)) consistencyError("a <= c <= b", a, b, k, c);
      if (options.existentialSplit) {
        requireStateOnly(p.prop, "the split subject");
        requireStateOnly(p.prop1, "the split first part");
        requireStateOnly(p.prop2, "the split second part");
        SplitPred sp;
        sp.subject = p.prop;
        sp.first = p.prop1;
        sp.second = p.prop2;
        sp.lo = a;
        sp.hi = b;
        return makeBltl({std::move(sp)});
      }
      return bltlImplies(
          bltlNext(a, bltlGlobally(b - a, state(p.prop))),
          bltlAnd({bltlNext(a, bltlGlobally(c - a, state(p.prop1))),
                   bltlNext(c, bltlGlobally(b - c, state(p.prop2)))}));
    }
  }
  throw SemanticError("unknown pattern kind");
}

namespace {

BltlPtr propertyToFormula(const PropertyPtr& prop, double k,
                          const TranslateOptions& options) {
  return std::visit(
      [&](const auto& x) -> BltlPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Quantified>) {
          throw SemanticError("quantifier survived unfolding; collection '" +
                              joinSteps(x.collection.steps) + "' did not resolve");
        } else if constexpr (std::is_same_v<T, PatternExpr>) {
          return translatePattern(x, k, options);
        } else if constexpr (std::is_same_v<T, OclExprPtr>) {
          return propToFormula(x);
        } else {
          static_assert(std::is_same_v<T, PropConnective>);
          std::vector<BltlPtr> parts;
          parts.reserve(x.parts.size());
          for (const auto& part : x.parts) {
            parts.push_back(propertyToFormula(part, k, options));
          }
          return x.conjunction ? bltlAnd(std::move(parts)) : bltlOr(std::move(parts));
        }
      },
      prop->node);
}

}  // namespace

BltlPtr translateProperty(const PropertyPtr& property, double k, const SosModel& model,
                          const TranslateOptions& options) {
  BltlPtr f = propertyToFormula(unfold(property, model), k, options);
  return options.simplify ? simplifyFormula(f) : f;
}

BltlPtr translateContract(const GcslContract& contract, double k, const SosModel& model,
                          const TranslateOptions& options) {
  BltlPtr goal = translateProperty(contract.goal, k, model, options);
  if (!contract.assumption) return goal;
  BltlPtr assumption = translateProperty(contract.assumption, k, model, options);
  BltlPtr f = bltlImplies(std::move(assumption), std::move(goal));
  return options.simplify ? simplifyFormula(f) : f;
}

BltlPtr simplifyFormula(const BltlPtr& formula) {
  return std::visit(
      [&](const auto& x) -> BltlPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BNot>) {
          BltlPtr arg = simplifyFormula(x.arg);
          if (const auto* inner = std::get_if<BNot>(&arg->node)) return inner->arg;
          if (std::holds_alternative<BTrue>(arg->node)) return bltlFalse();
          if (std::holds_alternative<BFalse>(arg->node)) return bltlTrue();
          return bltlNot(std::move(arg));
        } else if constexpr (std::is_same_v<T, BAnd> || std::is_same_v<T, BOr>) {
          constexpr bool isAnd = std::is_same_v<T, BAnd>;
          std::vector<BltlPtr> parts;
          for (const auto& a : x.args) {
            BltlPtr s = simplifyFormula(a);
            // Flatten nested connectives of the same kind.
            if (const auto* same = std::get_if<T>(&s->node)) {
              parts.insert(parts.end(), same->args.begin(), same->args.end());
              continue;
            }
            if (isAnd && std::holds_alternative<BTrue>(s->node)) continue;
            if (!isAnd && std::holds_alternative<BFalse>(s->node)) continue;
            if (isAnd && std::holds_alternative<BFalse>(s->node)) return bltlFalse();
            if (!isAnd && std::holds_alternative<BTrue>(s->node)) return bltlTrue();
            parts.push_back(std::move(s));
          }
          if (parts.empty()) return isAnd ? bltlTrue() : bltlFalse();
          return isAnd ? bltlAnd(std::move(parts)) : bltlOr(std::move(parts));
        } else if constexpr (std::is_same_v<T, BImplies>) {
          BltlPtr lhs = simplifyFormula(x.lhs);
          BltlPtr rhs = simplifyFormula(x.rhs);
          if (std::holds_alternative<BTrue>(lhs->node)) return rhs;
          if (std::holds_alternative<BFalse>(lhs->node)) return bltlTrue();
          return bltlImplies(std::move(lhs), std::move(rhs));
        } else if constexpr (std::is_same_v<T, BFinally>) {
          return bltlFinally(x.bound, simplifyFormula(x.arg));
        } else if constexpr (std::is_same_v<T, BGlobally>) {
          return bltlGlobally(x.bound, simplifyFormula(x.arg));
        } else if constexpr (std::is_same_v<T, BNext>) {
          BltlPtr arg = simplifyFormula(x.arg);
          if (x.bound == 0) return arg;  // X<=0 is the identity
          return bltlNext(x.bound, std::move(arg));
        } else if constexpr (std::is_same_v<T, BUntil>) {
          return bltlUntil(x.bound, simplifyFormula(x.lhs), simplifyFormula(x.rhs));
        } else if constexpr (std::is_same_v<T, BWeakUntil>) {
          return bltlWeakUntil(x.bound, simplifyFormula(x.lhs), simplifyFormula(x.rhs));
        } else {
          // StatePred with a literal payload folds to a constant.
          if constexpr (std::is_same_v<T, StatePred>) {
            if (const auto* lit = std::get_if<BoolLit>(&x.expr->node)) {
              return lit->value ? bltlTrue() : bltlFalse();
            }
          }
          return formula;
        }
      },
      formula->node);
}

}  // namespace sosmc
