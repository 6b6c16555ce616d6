#pragma once

#include "sosmc/bltl.hpp"
#include "sosmc/model.hpp"

namespace sosmc {

struct CheckOptions {
  /// Weak until defaults to (lhs U<=k rhs) or G<=k rhs. This switches the
  /// disjunct to G<=k lhs.
  bool standardWeakUntil = false;
};

/// Time span a trace must cover past its first sample so that every bound
/// in the formula is reachable. Infinite (to-end) bounds contribute their
/// operand's span only.
double requiredSpan(const BltlPtr& formula);

/// Decides a formula on a finite trace.
///
/// Each temporal operator quantifies over the samples of the current
/// suffix whose times lie within [t0, t0 + bound], where t0 is the
/// suffix's own first sample time; the operand is evaluated on the suffix
/// starting there. Bounds are inclusive at both ends.
///
/// Throws TraceError when trace.span() < requiredSpan(formula), naming
/// the chain of bounds that overruns the trace; EvalError propagates from
/// state predicates as a monitoring fault.
Verdict check(const BltlPtr& formula, const TimedTrace& trace,
              const SosModel* model = nullptr, const CheckOptions& options = {});

/// Occurrences of prop within [origin+lo, origin+hi], where origin is the
/// time of sample `suffix`. An occurrence is a rising edge; holding
/// already at the window start counts once, contiguous satisfaction
/// counts once. Throws TraceError when the window leaves the trace.
long long occCount(const OclExprPtr& prop, const Bindings& bindings, double lo,
                   double hi, const TimedTrace& trace, const SosModel* model = nullptr,
                   std::size_t suffix = 0);

/// Mean/sum/prod of expr over the samples with time in [windowLo,
/// windowHi] (absolute trace times), unweighted by dwell time.
/// Sum over an empty window is 0; mean and prod require a sample.
double runAggregate(PathAgg kind, const OclExprPtr& expr, const TimedTrace& trace,
                    double windowLo, double windowHi, const Bindings& bindings = {},
                    const SosModel* model = nullptr);

/// Value of expr at stateAt(trace, origin + offset) with origin the time
/// of sample `suffix`.
double atValue(const OclExprPtr& expr, const TimedTrace& trace, double offset,
               const Bindings& bindings = {}, const SosModel* model = nullptr,
               std::size_t suffix = 0);

}  // namespace sosmc
