#pragma once

#include "sosmc/model.hpp"
#include "sosmc/ocl_ast.hpp"

namespace sosmc {

/// Evaluates a closed boolean expression against one state. `bindings`
/// resolves free variables to instance ids; `model` (optional) provides
/// collections, refs and enum literals. Pure: same inputs, same result.
/// Throws EvalError on unresolved names, type mismatches and division by
/// zero. Run operators (mean/sum/prod/at) are rejected here; they only
/// have meaning over a whole trace.
bool evalBool(const OclExprPtr& expr, const StateValuation& state,
              const Bindings& bindings = {}, const SosModel* model = nullptr);

/// Numeric evaluation with collection aggregation (->sum(), ->size()).
double evalArith(const OclExprPtr& expr, const StateValuation& state,
                 const Bindings& bindings = {}, const SosModel* model = nullptr);

/// General evaluation; result is a boolean, number or symbol.
Value evalValue(const OclExprPtr& expr, const StateValuation& state,
                const Bindings& bindings = {}, const SosModel* model = nullptr);

}  // namespace sosmc
