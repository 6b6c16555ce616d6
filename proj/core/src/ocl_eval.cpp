#include "sosmc/ocl_eval.hpp"

#include <cmath>

#include "sosmc/errors.hpp"

namespace sosmc {

namespace {

// A path denotes a value, an instance, an ordered instance list (collection
// or ref), or a value projection over an instance list.
struct InstanceRefName {
  std::string id;
};
struct InstanceList {
  std::vector<std::string> ids;
};
struct ValueList {
  std::vector<Value> values;
};
using PathResult = std::variant<Value, InstanceRefName, InstanceList, ValueList>;

struct Env {
  const StateValuation& state;
  const Bindings& bindings;
  const SosModel* model;
};

std::string joinSteps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '.';
    out += steps[i];
  }
  return out;
}

// In collection context (under ->size()/->sum()/quantifiers), attribute
// steps project over every member, even of singleton lists. In scalar
// context a singleton list is navigated like its one instance.
PathResult resolvePath(const Env& env, const std::vector<std::string>& steps,
                       bool collectionContext = false) {
  if (steps.empty()) throw EvalError("empty path");
  const std::string& head = steps.front();

  PathResult cur;
  std::size_t next = 1;
  bool rootSoS = false;

  auto bindIt = env.bindings.find(head);
  if (bindIt != env.bindings.end()) {
    cur = InstanceRefName{bindIt->second};
  } else if (head == "SoS") {
    if (steps.size() == 1) throw EvalError("'SoS' needs a collection name");
    if (!env.model) {
      throw EvalError("'SoS." + steps[1] + "' needs a model to resolve");
    }
    rootSoS = true;
  } else if (env.model && env.model->instance(head)) {
    cur = InstanceRefName{head};
  } else if (steps.size() == 1) {
    // Enum literal: declared one when a model is present, otherwise any
    // bare name a trace may carry.
    if (!env.model || env.model->isEnumLiteral(head)) {
      return Value(Symbol{head});
    }
    throw EvalError("unresolved name '" + head + "'");
  } else if (!env.model && env.state.find(head, steps[1])) {
    // Model-free evaluation straight off the trace layout.
    if (steps.size() > 2) {
      throw EvalError("path '" + joinSteps(steps) + "' needs a model to resolve");
    }
    return *env.state.find(head, steps[1]);
  } else {
    throw EvalError("unresolved name '" + head + "'");
  }

  if (rootSoS) {
    const auto* coll = env.model->collection(steps[1]);
    if (!coll) throw EvalError("unknown collection 'SoS." + steps[1] + "'");
    cur = InstanceList{*coll};
    next = 2;
  }

  for (std::size_t i = next; i < steps.size(); ++i) {
    const std::string& step = steps[i];
    if (auto* inst = std::get_if<InstanceRefName>(&cur)) {
      // Attribute beats ref on name lookup; finalize() forbids collisions.
      if (const Value* v = env.state.find(inst->id, step)) {
        cur = *v;
        continue;
      }
      if (env.model) {
        if (const auto* targets = env.model->instanceRef(inst->id, step)) {
          cur = InstanceList{*targets};
          continue;
        }
      }
      throw EvalError("no attribute or ref '" + step + "' on instance '" + inst->id + "'");
    }
    if (auto* list = std::get_if<InstanceList>(&cur)) {
      bool allHaveAttr = !list->ids.empty();
      for (const auto& id : list->ids) {
        if (!env.state.find(id, step)) allHaveAttr = false;
      }
      if (list->ids.size() == 1 && !(collectionContext && allHaveAttr)) {
        // Navigation through a singleton ref continues on its target.
        std::string id = list->ids.front();
        if (const Value* v = env.state.find(id, step)) {
          cur = *v;
          continue;
        }
        if (env.model) {
          if (const auto* targets = env.model->instanceRef(id, step)) {
            cur = InstanceList{*targets};
            continue;
          }
        }
        throw EvalError("no attribute or ref '" + step + "' on instance '" + id + "'");
      }
      // Attribute projection over a collection.
      ValueList projected;
      projected.values.reserve(list->ids.size());
      for (const auto& id : list->ids) {
        const Value* v = env.state.find(id, step);
        if (!v) {
          throw EvalError("no attribute '" + step + "' on instance '" + id +
                          "' while projecting '" + joinSteps(steps) + "'");
        }
        projected.values.push_back(*v);
      }
      cur = std::move(projected);
      continue;
    }
    if (std::holds_alternative<Value>(cur)) {
      throw EvalError("'" + step + "' applied to a plain value in path '" +
                      joinSteps(steps) + "'");
    }
    throw EvalError("cannot navigate '" + step + "' in path '" + joinSteps(steps) + "'");
  }
  return cur;
}

Value evalNode(const Env& env, const OclExprPtr& e);

bool evalBoolNode(const Env& env, const OclExprPtr& e) {
  return evalNode(env, e).asBool();
}

Value evalPathAsValue(const Env& env, const std::vector<std::string>& steps) {
  PathResult r = resolvePath(env, steps);
  if (auto* v = std::get_if<Value>(&r)) return *v;
  throw EvalError("path '" + joinSteps(steps) + "' does not denote a value");
}

Value evalCollectionOp(const Env& env, const CollectionOp& op) {
  PathResult r = resolvePath(env, op.path.steps, /*collectionContext=*/true);
  if (op.op == CollOp::Size) {
    if (auto* list = std::get_if<InstanceList>(&r)) {
      return Value(static_cast<std::int64_t>(list->ids.size()));
    }
    if (auto* vals = std::get_if<ValueList>(&r)) {
      return Value(static_cast<std::int64_t>(vals->values.size()));
    }
    throw EvalError("size() needs a collection, got '" + joinSteps(op.path.steps) + "'");
  }
  // ->sum()
  if (auto* vals = std::get_if<ValueList>(&r)) {
    double total = 0;
    bool allInt = true;
    for (const auto& v : vals->values) {
      if (!v.isInt()) allInt = false;
      total += v.asNumber();
    }
    if (allInt) return Value(static_cast<std::int64_t>(total));
    return Value(total);
  }
  if (std::holds_alternative<InstanceList>(r)) {
    throw EvalError("sum() over '" + joinSteps(op.path.steps) +
                    "' needs an attribute projection");
  }
  throw EvalError("sum() needs a collection, got '" + joinSteps(op.path.steps) + "'");
}

std::vector<std::string> collectionMembers(const Env& env, const PathRef& coll) {
  PathResult r = resolvePath(env, coll.steps, /*collectionContext=*/true);
  if (auto* list = std::get_if<InstanceList>(&r)) return list->ids;
  throw EvalError("'" + joinSteps(coll.steps) + "' is not an instance collection");
}

Value evalNode(const Env& env, const OclExprPtr& e) {
  if (!e) throw EvalError("null expression");
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolLit>) {
          return Value(x.value);
        } else if constexpr (std::is_same_v<T, NumLit>) {
          if (x.integral) return Value(static_cast<std::int64_t>(x.value));
          return Value(x.value);
        } else if constexpr (std::is_same_v<T, PathRef>) {
          return evalPathAsValue(env, x.steps);
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          if (x.op == BoolOp::And) {
            for (const auto& a : x.args) {
              if (!evalBoolNode(env, a)) return Value(false);
            }
            return Value(true);
          }
          for (const auto& a : x.args) {
            if (evalBoolNode(env, a)) return Value(true);
          }
          return Value(false);
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          return Value(!evalBoolNode(env, x.arg));
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          return Value(!evalBoolNode(env, x.lhs) || evalBoolNode(env, x.rhs));
        } else if constexpr (std::is_same_v<T, Compare>) {
          Value l = evalNode(env, x.lhs);
          Value r = evalNode(env, x.rhs);
          switch (x.op) {
            case CmpOp::Eq: return Value(l.equals(r));
            case CmpOp::Lt: return Value(l.compare(r) < 0);
            case CmpOp::Le: return Value(l.compare(r) <= 0);
            case CmpOp::Ge: return Value(l.compare(r) >= 0);
            case CmpOp::Gt: return Value(l.compare(r) > 0);
          }
          throw EvalError("bad comparison");
        } else if constexpr (std::is_same_v<T, Arith>) {
          Value l = evalNode(env, x.lhs);
          Value r = evalNode(env, x.rhs);
          double a = l.asNumber();
          double b = r.asNumber();
          bool ints = l.isInt() && r.isInt();
          switch (x.op) {
            case ArithOp::Add:
              return ints ? Value(static_cast<std::int64_t>(a + b)) : Value(a + b);
            case ArithOp::Sub:
              return ints ? Value(static_cast<std::int64_t>(a - b)) : Value(a - b);
            case ArithOp::Mul:
              return ints ? Value(static_cast<std::int64_t>(a * b)) : Value(a * b);
            case ArithOp::Div:
              if (b == 0) throw EvalError("division by zero");
              return Value(a / b);
          }
          throw EvalError("bad arithmetic");
        } else if constexpr (std::is_same_v<T, CollectionOp>) {
          return evalCollectionOp(env, x);
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          std::vector<std::string> members = collectionMembers(env, x.coll);
          Bindings inner = env.bindings;
          for (const auto& id : members) {
            inner[x.var] = id;
            Env scoped{env.state, inner, env.model};
            bool b = evalBoolNode(scoped, x.body);
            if (x.forAll && !b) return Value(false);
            if (!x.forAll && b) return Value(true);
          }
          return Value(x.forAll);  // forAll over empty: true; exists: false
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          throw EvalError("run operator outside a run context");
        } else {
          static_assert(std::is_same_v<T, AtExpr>);
          throw EvalError("at() outside a run context");
        }
      },
      e->node);
}

}  // namespace

Value evalValue(const OclExprPtr& expr, const StateValuation& state,
                const Bindings& bindings, const SosModel* model) {
  Env env{state, bindings, model};
  return evalNode(env, expr);
}

bool evalBool(const OclExprPtr& expr, const StateValuation& state,
              const Bindings& bindings, const SosModel* model) {
  return evalValue(expr, state, bindings, model).asBool();
}

double evalArith(const OclExprPtr& expr, const StateValuation& state,
                 const Bindings& bindings, const SosModel* model) {
  return evalValue(expr, state, bindings, model).asNumber();
}

}  // namespace sosmc
