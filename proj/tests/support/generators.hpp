#pragma once

// Seeded generators for property-style tests: random traces over a fixed
// layout, random bounded formulas whose span fits a budget, and random
// small models with quantified properties.

#include <random>
#include <string>
#include <vector>

#include "sosmc/bltl.hpp"
#include "sosmc/gcsl_ast.hpp"
#include "sosmc/model.hpp"
#include "sosmc/ocl_ast.hpp"

namespace testsupport {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool flip(double p = 0.5) {
    return std::bernoulli_distribution(p)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Model-free traces over the fixed layout {a.x, a.p, b.y, b.q}.
// ---------------------------------------------------------------------------

inline sosmc::TimedTrace randomTrace(Gen& g, int maxLen = 12, double minSpan = 0) {
  auto layout = sosmc::Layout::fromKeys({"a.x", "a.p", "b.y", "b.q"});
  sosmc::TimedTrace trace;
  trace.layout = layout;
  int len = g.integer(2, maxLen);
  double t = 0;
  for (int i = 0; i < len; ++i) {
    sosmc::StateValuation s;
    s.time = t;
    s.layout = layout;
    s.values = {sosmc::Value(g.real(-5, 5)), sosmc::Value(g.flip()),
                sosmc::Value(g.real(-5, 5)), sosmc::Value(g.flip())};
    trace.samples.push_back(std::move(s));
    t += g.real(0.25, 2.0);
  }
  if (trace.samples.back().time < minSpan) {
    sosmc::StateValuation s = trace.samples.back();
    s.time = minSpan + g.real(0.01, 1.0);
    trace.samples.push_back(std::move(s));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Random formulas with requiredSpan <= budget.
// ---------------------------------------------------------------------------

inline sosmc::OclExprPtr randomStateExpr(Gen& g) {
  using namespace sosmc;
  switch (g.integer(0, 4)) {
    case 0: return oclPath({"a", "p"});
    case 1: return oclPath({"b", "q"});
    case 2:
      return oclCompare(CmpOp::Gt, oclPath({"a", "x"}), oclNumber(g.real(-4, 4)));
    case 3:
      return oclCompare(CmpOp::Le, oclPath({"b", "y"}), oclNumber(g.real(-4, 4)));
    default:
      return oclCompare(g.flip() ? CmpOp::Lt : CmpOp::Ge, oclPath({"a", "x"}),
                        oclPath({"b", "y"}));
  }
}

inline sosmc::BltlPtr randomAtom(Gen& g, double budget) {
  using namespace sosmc;
  int pick = g.integer(0, 9);
  if (pick <= 5) return bltlState(randomStateExpr(g));
  if (pick <= 7 && budget > 0) {
    OccPred occ;
    occ.prop = randomStateExpr(g);
    occ.lo = g.real(0, budget * 0.5);
    occ.hi = occ.lo + g.real(0, budget - occ.lo);
    occ.rel = g.flip() ? CmpOp::Ge : CmpOp::Le;
    occ.count = g.integer(0, 3);
    return makeBltl({std::move(occ)});
  }
  AggPred agg;
  PathAgg op = static_cast<PathAgg>(g.integer(0, 2));
  agg.lhs = makeOcl({RunAggExpr{op, oclPath({"a", "x"})}});
  agg.rel = g.flip() ? CmpOp::Le : CmpOp::Gt;
  agg.rhs = oclNumber(g.real(-6, 6));
  return makeBltl({std::move(agg)});
}

inline sosmc::BltlPtr randomFormula(Gen& g, int depth, double budget) {
  using namespace sosmc;
  if (depth <= 0) return randomAtom(g, budget);
  switch (g.integer(0, 9)) {
    case 0: return bltlNot(randomFormula(g, depth - 1, budget));
    case 1:
      return bltlAnd({randomFormula(g, depth - 1, budget),
                      randomFormula(g, depth - 1, budget)});
    case 2:
      return bltlOr({randomFormula(g, depth - 1, budget),
                     randomFormula(g, depth - 1, budget)});
    case 3:
      return bltlImplies(randomFormula(g, depth - 1, budget),
                         randomFormula(g, depth - 1, budget));
    case 4: {
      double b = g.real(0, budget);
      return bltlFinally(b, randomFormula(g, depth - 1, budget - b));
    }
    case 5: {
      double b = g.real(0, budget);
      return bltlGlobally(b, randomFormula(g, depth - 1, budget - b));
    }
    case 6: {
      double b = g.real(0, budget);
      return bltlNext(b, randomFormula(g, depth - 1, budget - b));
    }
    case 7: {
      double b = g.real(0, budget);
      return bltlUntil(b, randomFormula(g, depth - 1, budget - b),
                       randomFormula(g, depth - 1, budget - b));
    }
    case 8: {
      double b = g.real(0, budget);
      return bltlWeakUntil(b, randomFormula(g, depth - 1, budget - b),
                           randomFormula(g, depth - 1, budget - b));
    }
    default: return randomAtom(g, budget);
  }
}

// ---------------------------------------------------------------------------
// Small models with collections, and quantified pattern properties.
// ---------------------------------------------------------------------------

inline sosmc::SosModel randomSmallModel(Gen& g) {
  sosmc::SosModel model;
  model.name = "small";
  model.scale.baseUnit = "s";
  sosmc::ComponentType item;
  item.name = "Item";
  item.attributes.push_back({"p", sosmc::AttrKind::Bool, {}, sosmc::Value(false), {}});
  item.attributes.push_back({"x", sosmc::AttrKind::Real, {}, sosmc::Value(0.0), {}});
  model.components.push_back(std::move(item));
  int n = g.integer(1, 4);
  std::vector<std::string> all;
  for (int i = 0; i < n; ++i) {
    std::string id = "item" + std::to_string(i + 1);
    model.instances.push_back({id, "Item", {}, {}});
    all.push_back(id);
  }
  model.collections.emplace_back("grp", all);
  std::vector<std::string> sub;
  for (const auto& id : all) {
    if (g.flip(0.6)) sub.push_back(id);
  }
  model.collections.emplace_back("sub", sub);
  model.finalize();
  return model;
}

inline sosmc::TimedTrace randomModelTrace(Gen& g, const sosmc::SosModel& model,
                                          double minSpan, int maxLen = 12) {
  sosmc::TimedTrace trace;
  trace.layout = model.layout;
  int len = g.integer(2, maxLen);
  double t = 0;
  for (int i = 0; i < len; ++i) {
    sosmc::StateValuation s;
    s.time = t;
    s.layout = model.layout;
    for (std::size_t k = 0; k < model.layout->keys.size(); ++k) {
      bool isBool = model.layout->keys[k].ends_with(".p");
      s.values.push_back(isBool ? sosmc::Value(g.flip())
                                : sosmc::Value(g.real(-3, 3)));
    }
    trace.samples.push_back(std::move(s));
    t += g.real(0.5, 3.0);
  }
  if (trace.samples.back().time < minSpan) {
    sosmc::StateValuation s = trace.samples.back();
    s.time = minSpan + 0.5;
    trace.samples.push_back(std::move(s));
  }
  return trace;
}

/// Slot proposition over the bound variables currently in scope.
inline sosmc::OclExprPtr randomSlot(Gen& g, const std::vector<std::string>& vars) {
  using namespace sosmc;
  const std::string& v = vars[static_cast<std::size_t>(
      g.integer(0, static_cast<int>(vars.size()) - 1))];
  switch (g.integer(0, 4)) {
    case 0: return oclPath({v, "p"});
    case 1: return oclNot(oclPath({v, "p"}));
    case 2: return oclCompare(CmpOp::Gt, oclPath({v, "x"}), oclNumber(g.real(-2, 2)));
    case 3:
      if (vars.size() >= 2) {
        return oclOr({oclPath({vars[0], "p"}), oclPath({vars[1], "p"})});
      }
      return oclPath({v, "p"});
    default:
      // An OCL-level quantifier exercises the dynamic-iteration route.
      return makeOcl({QuantExpr{g.flip(), PathRef{{"SoS", "grp"}}, "w",
                                oclPath({"w", "p"})}});
  }
}

inline sosmc::PatternExpr randomPattern(Gen& g, const std::vector<std::string>& vars,
                                        double k) {
  using namespace sosmc;
  PatternExpr p;
  switch (g.integer(0, 3)) {
    case 0:
      p.kind = PatternKind::Always;
      p.prop = randomSlot(g, vars);
      break;
    case 1:
      p.kind = PatternKind::WheneverHolds;
      p.prop = randomSlot(g, vars);
      p.prop1 = randomSlot(g, vars);
      break;
    case 2: {
      p.kind = PatternKind::WheneverWithin;
      p.prop = randomSlot(g, vars);
      p.prop1 = randomSlot(g, vars);
      double b = g.real(0.5, k * 0.8);
      double a = g.real(0, b);
      p.intervals.push_back({a, b, true, true, false});
      break;
    }
    default: {
      p.kind = PatternKind::WheneverNotDuring;
      p.prop = randomSlot(g, vars);
      p.prop1 = randomSlot(g, vars);
      double b = g.real(0.5, k * 0.8);
      double a = g.real(0, b);
      p.intervals.push_back({a, b, true, true, false});
      break;
    }
  }
  return p;
}

/// forAll/exists (depth 1 or 2) over grp/sub with a pattern body.
inline sosmc::PropertyPtr randomQuantifiedProperty(Gen& g, double k, int depth = 2) {
  using namespace sosmc;
  std::vector<std::string> vars{"u"};
  Quantified outer;
  outer.forAll = g.flip();
  outer.collection.steps = {"SoS", g.flip(0.75) ? "grp" : "sub"};
  outer.var = "u";
  if (depth >= 2 && g.flip()) {
    Quantified inner;
    inner.forAll = g.flip();
    inner.collection.steps = {"SoS", g.flip(0.75) ? "grp" : "sub"};
    inner.var = "v";
    vars.push_back("v");
    inner.body = makeProperty({randomPattern(g, vars, k)});
    outer.body = makeProperty({std::move(inner)});
  } else {
    outer.body = makeProperty({randomPattern(g, vars, k)});
  }
  return makeProperty({std::move(outer)});
}

}  // namespace testsupport
