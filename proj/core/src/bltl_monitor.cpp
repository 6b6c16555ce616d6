#include "sosmc/bltl_monitor.hpp"

#include <cmath>
#include <unordered_map>

#include "sosmc/errors.hpp"
#include "sosmc/ocl_eval.hpp"

namespace sosmc {

namespace {

double spanOf(const BltlPtr& f);

double boundPlus(double bound, double rest) {
  if (bound < 0) {
    throw SemanticError("temporal bound must be non-negative, got " +
                        formatNumber(bound));
  }
  if (std::isinf(bound)) return rest;  // to-end bound adapts to the trace
  return bound + rest;
}

double spanOf(const BltlPtr& f) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BTrue> || std::is_same_v<T, BFalse> ||
                      std::is_same_v<T, StatePred>) {
          return 0;
        } else if constexpr (std::is_same_v<T, OccPred>) {
          return x.hi;
        } else if constexpr (std::is_same_v<T, SplitPred>) {
          return x.hi;
        } else if constexpr (std::is_same_v<T, AggPred>) {
          double m = 0;
          // at() offsets must stay on the trace.
          struct Walk {
            double maxAt = 0;
            void visit(const OclExprPtr& e) {
              if (!e) return;
              std::visit(
                  [&](const auto& n) {
                    using N = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<N, AtExpr>) {
                      maxAt = std::max(maxAt, n.time);
                      visit(n.arg);
                    } else if constexpr (std::is_same_v<N, Arith> ||
                                         std::is_same_v<N, Compare> ||
                                         std::is_same_v<N, ImpliesExpr>) {
                      visit(n.lhs);
                      visit(n.rhs);
                    } else if constexpr (std::is_same_v<N, NaryBool>) {
                      for (const auto& a : n.args) visit(a);
                    } else if constexpr (std::is_same_v<N, NotExpr> ||
                                         std::is_same_v<N, RunAggExpr>) {
                      visit(n.arg);
                    } else if constexpr (std::is_same_v<N, QuantExpr>) {
                      visit(n.body);
                    }
                  },
                  e->node);
            }
          } walk;
          walk.visit(x.lhs);
          walk.visit(x.rhs);
          m = walk.maxAt;
          return m;
        } else if constexpr (std::is_same_v<T, BNot>) {
          return spanOf(x.arg);
        } else if constexpr (std::is_same_v<T, BAnd> || std::is_same_v<T, BOr>) {
          double m = 0;
          for (const auto& a : x.args) m = std::max(m, spanOf(a));
          return m;
        } else if constexpr (std::is_same_v<T, BImplies>) {
          return std::max(spanOf(x.lhs), spanOf(x.rhs));
        } else if constexpr (std::is_same_v<T, BFinally> ||
                             std::is_same_v<T, BGlobally> ||
                             std::is_same_v<T, BNext>) {
          return boundPlus(x.bound, spanOf(x.arg));
        } else {
          return boundPlus(x.bound, std::max(spanOf(x.lhs), spanOf(x.rhs)));
        }
      },
      f->node);
}

/// Chain of bounds realizing the maximal span, e.g. "G<=5 + X<=1 + F<=2".
std::string criticalChain(const BltlPtr& f) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, OccPred>) {
          return "occ window hi=" + formatNumber(x.hi);
        } else if constexpr (std::is_same_v<T, SplitPred>) {
          return "split window hi=" + formatNumber(x.hi);
        } else if constexpr (std::is_same_v<T, AggPred>) {
          return "at() offset " + formatNumber(spanOf(f));
        } else if constexpr (std::is_same_v<T, BNot>) {
          return criticalChain(x.arg);
        } else if constexpr (std::is_same_v<T, BAnd> || std::is_same_v<T, BOr>) {
          const BltlPtr* best = nullptr;
          double bestSpan = -1;
          for (const auto& a : x.args) {
            double s = spanOf(a);
            if (s > bestSpan) {
              bestSpan = s;
              best = &a;
            }
          }
          return best ? criticalChain(*best) : std::string();
        } else if constexpr (std::is_same_v<T, BImplies>) {
          return spanOf(x.lhs) >= spanOf(x.rhs) ? criticalChain(x.lhs)
                                                : criticalChain(x.rhs);
        } else if constexpr (std::is_same_v<T, BFinally> ||
                             std::is_same_v<T, BGlobally> ||
                             std::is_same_v<T, BNext>) {
          const char* op = std::is_same_v<T, BFinally>  ? "F"
                           : std::is_same_v<T, BGlobally> ? "G"
                                                          : "X";
          std::string head = std::string(op) + "<=" +
                             (std::isinf(x.bound) ? "end" : formatNumber(x.bound));
          std::string rest = criticalChain(x.arg);
          return rest.empty() ? head : head + " + " + rest;
        } else if constexpr (std::is_same_v<T, BUntil> || std::is_same_v<T, BWeakUntil>) {
          const char* op = std::is_same_v<T, BUntil> ? "U" : "W";
          std::string head = std::string(op) + "<=" +
                             (std::isinf(x.bound) ? "end" : formatNumber(x.bound));
          std::string rest = spanOf(x.lhs) >= spanOf(x.rhs) ? criticalChain(x.lhs)
                                                            : criticalChain(x.rhs);
          return rest.empty() ? head : head + " + " + rest;
        } else {
          return std::string();
        }
      },
      f->node);
}

struct Checker {
  const TimedTrace& trace;
  const SosModel* model;
  const CheckOptions& options;
  std::unordered_map<const BltlFormula*, std::vector<signed char>> memo;

  double timeOf(std::size_t i) const { return trace.samples[i].time; }
  std::size_t lastIndex() const { return trace.samples.size() - 1; }

  /// Largest sample index whose time is <= limit (searching from `from`).
  std::size_t lastWithin(std::size_t from, double limit) const {
    std::size_t i = from;
    while (i + 1 < trace.samples.size() && trace.samples[i + 1].time <= limit) ++i;
    return i;
  }

  bool evalState(const StatePred& p, std::size_t i) {
    return evalBool(p.expr, trace.samples[i], p.bindings, model);
  }

  bool evalOcc(const OccPred& p, std::size_t i) {
    long long n = occCount(p.prop, p.bindings, p.lo, p.hi, trace, model, i);
    switch (p.rel) {
      case CmpOp::Lt: return n < p.count;
      case CmpOp::Le: return n <= p.count;
      case CmpOp::Eq: return n == p.count;
      case CmpOp::Ge: return n >= p.count;
      case CmpOp::Gt: return n > p.count;
    }
    return false;
  }

  /// Evaluates a run-expression side of an AggPred at suffix i: run
  /// aggregates range over the whole remaining suffix, at() is an offset
  /// from the suffix origin, anything else is read at the suffix's first
  /// sample.
  double evalRunExpr(const OclExprPtr& e, const Bindings& bindings, std::size_t i) {
    return std::visit(
        [&](const auto& x) -> double {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, RunAggExpr>) {
            return runAggregate(x.op, x.arg, trace, timeOf(i), trace.endTime(),
                                bindings, model);
          } else if constexpr (std::is_same_v<T, AtExpr>) {
            return atValue(x.arg, trace, x.time, bindings, model, i);
          } else if constexpr (std::is_same_v<T, Arith>) {
            double a = evalRunExpr(x.lhs, bindings, i);
            double b = evalRunExpr(x.rhs, bindings, i);
            switch (x.op) {
              case ArithOp::Add: return a + b;
              case ArithOp::Sub: return a - b;
              case ArithOp::Mul: return a * b;
              case ArithOp::Div:
                if (b == 0) throw EvalError("division by zero in a run predicate");
                return a / b;
            }
            throw EvalError("bad arithmetic");
          } else {
            return evalArith(e, trace.samples[i], bindings, model);
          }
        },
        e->node);
  }

  bool evalSplit(const SplitPred& p, std::size_t i) {
    double origin = timeOf(i);
    double a = origin + p.lo;
    double b = origin + p.hi;
    if (b > trace.endTime()) {
      throw TraceError("split window [" + formatNumber(a) + ", " + formatNumber(b) +
                       "] leaves the trace");
    }
    std::size_t first = sampleIndexAt(trace, a);
    if (trace.samples[first].time < a) ++first;  // samples inside the window only
    if (first >= trace.samples.size() || trace.samples[first].time > b) {
      return true;  // no samples in the window: vacuous
    }
    std::size_t last = lastWithin(first, b);
    for (std::size_t j = first; j <= last; ++j) {
      if (!evalBool(p.subject, trace.samples[j], p.bindings, model)) return true;
    }
    for (std::size_t c = first; c <= last; ++c) {
      bool ok = true;
      for (std::size_t j = first; j <= c && ok; ++j) {
        ok = evalBool(p.first, trace.samples[j], p.bindings, model);
      }
      for (std::size_t j = c; j <= last && ok; ++j) {
        ok = evalBool(p.second, trace.samples[j], p.bindings, model);
      }
      if (ok) return true;
    }
    return false;
  }

  bool evalAgg(const AggPred& p, std::size_t i) {
    double l = evalRunExpr(p.lhs, p.bindings, i);
    double r = evalRunExpr(p.rhs, p.bindings, i);
    switch (p.rel) {
      case CmpOp::Lt: return l < r;
      case CmpOp::Le: return l <= r;
      case CmpOp::Eq: return l == r;
      case CmpOp::Ge: return l >= r;
      case CmpOp::Gt: return l > r;
    }
    return false;
  }

  bool eval(const BltlPtr& f, std::size_t i) {
    auto& slots = memo[f.get()];
    if (slots.empty()) slots.assign(trace.samples.size(), -1);
    if (slots[i] >= 0) return slots[i] != 0;
    bool result = std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BTrue>) {
            return true;
          } else if constexpr (std::is_same_v<T, BFalse>) {
            return false;
          } else if constexpr (std::is_same_v<T, StatePred>) {
            return evalState(x, i);
          } else if constexpr (std::is_same_v<T, OccPred>) {
            return evalOcc(x, i);
          } else if constexpr (std::is_same_v<T, AggPred>) {
            return evalAgg(x, i);
          } else if constexpr (std::is_same_v<T, SplitPred>) {
            return evalSplit(x, i);
          } else if constexpr (std::is_same_v<T, BNot>) {
            return !eval(x.arg, i);
          } else if constexpr (std::is_same_v<T, BAnd>) {
            for (const auto& a : x.args) {
              if (!eval(a, i)) return false;
            }
            return true;
          } else if constexpr (std::is_same_v<T, BOr>) {
            for (const auto& a : x.args) {
              if (eval(a, i)) return true;
            }
            return false;
          } else if constexpr (std::is_same_v<T, BImplies>) {
            return !eval(x.lhs, i) || eval(x.rhs, i);
          } else if constexpr (std::is_same_v<T, BFinally>) {
            double limit = std::isinf(x.bound) ? trace.endTime() : timeOf(i) + x.bound;
            std::size_t hi = lastWithin(i, limit);
            for (std::size_t j = i; j <= hi; ++j) {
              if (eval(x.arg, j)) return true;
            }
            return false;
          } else if constexpr (std::is_same_v<T, BGlobally>) {
            double limit = std::isinf(x.bound) ? trace.endTime() : timeOf(i) + x.bound;
            std::size_t hi = lastWithin(i, limit);
            for (std::size_t j = i; j <= hi; ++j) {
              if (!eval(x.arg, j)) return false;
            }
            return true;
          } else if constexpr (std::is_same_v<T, BNext>) {
            double limit = std::isinf(x.bound) ? trace.endTime() : timeOf(i) + x.bound;
            return eval(x.arg, lastWithin(i, limit));
          } else if constexpr (std::is_same_v<T, BUntil>) {
            return evalUntil(x.bound, x.lhs, x.rhs, i);
          } else {
            static_assert(std::is_same_v<T, BWeakUntil>);
            if (evalUntil(x.bound, x.lhs, x.rhs, i)) return true;
            const BltlPtr& disjunct = options.standardWeakUntil ? x.lhs : x.rhs;
            double limit = std::isinf(x.bound) ? trace.endTime() : timeOf(i) + x.bound;
            std::size_t hi = lastWithin(i, limit);
            for (std::size_t j = i; j <= hi; ++j) {
              if (!eval(disjunct, j)) return false;
            }
            return true;
          }
        },
        f->node);
    memo[f.get()][i] = result ? 1 : 0;
    return result;
  }

  bool evalUntil(double bound, const BltlPtr& lhs, const BltlPtr& rhs, std::size_t i) {
    double limit = std::isinf(bound) ? trace.endTime() : timeOf(i) + bound;
    std::size_t hi = lastWithin(i, limit);
    for (std::size_t j = i; j <= hi; ++j) {
      if (eval(rhs, j)) {
        bool prefixHolds = true;
        for (std::size_t m = i; m < j; ++m) {
          if (!eval(lhs, m)) {
            prefixHolds = false;
            break;
          }
        }
        if (prefixHolds) return true;
      }
    }
    return false;
  }
};

}  // namespace

double requiredSpan(const BltlPtr& formula) { return spanOf(formula); }

Verdict check(const BltlPtr& formula, const TimedTrace& trace, const SosModel* model,
              const CheckOptions& options) {
  validateTrace(trace);
  double need = spanOf(formula);
  if (trace.span() < need) {
    std::string chain = criticalChain(formula);
    throw TraceError("trace too short: spans " + formatNumber(trace.span()) +
                     " but the formula needs " + formatNumber(need) +
                     (chain.empty() ? "" : " (" + chain + ")"));
  }
  Checker checker{trace, model, options, {}};
  Verdict v;
  v.holds = checker.eval(formula, 0);
  if (!v.holds) {
    // First violating/witnessing point for the common root shapes.
    if (const auto* g = std::get_if<BGlobally>(&formula->node)) {
      double limit =
          std::isinf(g->bound) ? trace.endTime() : trace.startTime() + g->bound;
      std::size_t hi = checker.lastWithin(0, limit);
      for (std::size_t j = 0; j <= hi; ++j) {
        if (!checker.eval(g->arg, j)) {
          v.witnessTime = trace.samples[j].time;
          std::string operand = printBltl(g->arg);
          if (operand.size() > 120) operand = operand.substr(0, 117) + "...";
          v.note = "G operand first fails at t=" + formatNumber(*v.witnessTime) +
                   ": " + operand;
          break;
        }
      }
    } else if (std::holds_alternative<StatePred>(formula->node)) {
      v.witnessTime = trace.startTime();
      v.note = "state predicate is false at t=" + formatNumber(*v.witnessTime);
    }
  }
  return v;
}

long long occCount(const OclExprPtr& prop, const Bindings& bindings, double lo,
                   double hi, const TimedTrace& trace, const SosModel* model,
                   std::size_t suffix) {
  if (lo < 0 || hi < lo) {
    throw TraceError("bad occurrence window [" + formatNumber(lo) + ", " +
                     formatNumber(hi) + "]");
  }
  double origin = trace.samples[suffix].time;
  double a = origin + lo;
  double b = std::isinf(hi) ? trace.endTime() : origin + hi;
  if (b > trace.endTime()) {
    throw TraceError("occurrence window [" + formatNumber(a) + ", " + formatNumber(b) +
                     "] leaves the trace (ends at " + formatNumber(trace.endTime()) + ")");
  }
  // State holding at the window start counts as one occurrence; afterwards
  // count rising edges at sample times within (a, b].
  std::size_t start = sampleIndexAt(trace, a);
  bool prev = evalBool(prop, trace.samples[start], bindings, model);
  long long count = prev ? 1 : 0;
  for (std::size_t j = start + 1; j < trace.samples.size(); ++j) {
    if (trace.samples[j].time > b) break;
    bool here = evalBool(prop, trace.samples[j], bindings, model);
    if (here && !prev) ++count;
    prev = here;
  }
  return count;
}

double runAggregate(PathAgg kind, const OclExprPtr& expr, const TimedTrace& trace,
                    double windowLo, double windowHi, const Bindings& bindings,
                    const SosModel* model) {
  if (windowHi < windowLo) {
    throw TraceError("empty aggregation window");
  }
  double sum = 0;
  double prod = 1;
  long long count = 0;
  for (const auto& s : trace.samples) {
    if (s.time < windowLo) continue;
    if (s.time > windowHi) break;
    double v = evalArith(expr, s, bindings, model);
    sum += v;
    prod *= v;
    ++count;
  }
  switch (kind) {
    case PathAgg::Sum:
      return sum;
    case PathAgg::Mean:
      if (count == 0) throw TraceError("mean over a window with no samples");
      return sum / static_cast<double>(count);
    case PathAgg::Prod:
      if (count == 0) throw TraceError("prod over a window with no samples");
      return prod;
  }
  throw TraceError("bad aggregate kind");
}

double atValue(const OclExprPtr& expr, const TimedTrace& trace, double offset,
               const Bindings& bindings, const SosModel* model, std::size_t suffix) {
  double t = trace.samples[suffix].time + offset;
  return evalArith(expr, stateAt(trace, t), bindings, model);
}

}  // namespace sosmc
