#include "sosmc/model.hpp"

#include <algorithm>
#include <cmath>

#include "sosmc/errors.hpp"

namespace sosmc {

const AttributeDecl* ComponentType::attribute(std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const RefDecl* ComponentType::ref(std::string_view name) const {
  for (const auto& r : refs) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::shared_ptr<const Layout> Layout::fromKeys(std::vector<std::string> keys) {
  auto layout = std::make_shared<Layout>();
  layout->keys = std::move(keys);
  for (std::size_t i = 0; i < layout->keys.size(); ++i) {
    layout->index.emplace(layout->keys[i], i);
  }
  return layout;
}

std::optional<std::size_t> Layout::find(std::string_view key) const {
  auto it = index.find(std::string(key));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const Value* StateValuation::find(std::string_view instance,
                                  std::string_view attr) const {
  if (!layout) return nullptr;
  std::string key;
  key.reserve(instance.size() + attr.size() + 1);
  key.append(instance).append(1, '.').append(attr);
  auto slot = layout->find(key);
  if (!slot) return nullptr;
  return &values[*slot];
}

const Value& StateValuation::at(std::string_view instance,
                                std::string_view attr) const {
  const Value* v = find(instance, attr);
  if (!v) {
    throw EvalError("no attribute '" + std::string(instance) + "." +
                    std::string(attr) + "' in state");
  }
  return *v;
}

std::size_t sampleIndexAt(const TimedTrace& trace, double t) {
  if (trace.samples.empty()) throw TraceError("empty trace");
  if (t < trace.startTime() || t > trace.endTime()) {
    throw TraceError("time " + formatNumber(t) + " outside trace range [" +
                     formatNumber(trace.startTime()) + ", " +
                     formatNumber(trace.endTime()) + "]");
  }
  // Last sample with time <= t.
  auto it = std::upper_bound(
      trace.samples.begin(), trace.samples.end(), t,
      [](double lhs, const StateValuation& s) { return lhs < s.time; });
  return static_cast<std::size_t>(it - trace.samples.begin()) - 1;
}

const StateValuation& stateAt(const TimedTrace& trace, double t) {
  return trace.samples[sampleIndexAt(trace, t)];
}

void validateTrace(const TimedTrace& trace) {
  if (trace.samples.empty()) throw TraceError("trace has no samples");
  const std::size_t width = trace.layout ? trace.layout->keys.size() : 0;
  double prev = -1;
  bool first = true;
  for (const auto& s : trace.samples) {
    if (!first && !(s.time > prev)) {
      throw TraceError("sample times must strictly increase (" +
                       formatNumber(prev) + " then " + formatNumber(s.time) + ")");
    }
    if (s.time < 0) throw TraceError("negative sample time");
    if (s.values.size() != width) {
      throw TraceError("sample at t=" + formatNumber(s.time) +
                       " is not a total valuation");
    }
    prev = s.time;
    first = false;
  }
}

const ComponentType* SosModel::component(std::string_view name) const {
  for (const auto& c : components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Instance* SosModel::instance(std::string_view id) const {
  std::size_t i = instanceIndex(id);
  return i == npos ? nullptr : &instances[i];
}

std::size_t SosModel::instanceIndex(std::string_view id) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].id == id) return i;
  }
  return npos;
}

const ComponentType& SosModel::typeOf(const Instance& inst) const {
  const ComponentType* c = component(inst.type);
  if (!c) throw SemanticError("instance '" + inst.id + "' has unknown type '" + inst.type + "'");
  return *c;
}

const std::vector<std::string>* SosModel::collection(std::string_view name) const {
  for (const auto& [n, members] : collections) {
    if (n == name) return &members;
  }
  return nullptr;
}

const std::vector<std::string>* SosModel::instanceRef(
    std::string_view instanceId, std::string_view refName) const {
  const Instance* inst = instance(instanceId);
  if (!inst) return nullptr;
  for (const auto& [n, members] : inst->refs) {
    if (n == refName) return &members;
  }
  // Declared but unfilled refs read as empty collections.
  const ComponentType* type = component(inst->type);
  if (type && type->ref(refName)) {
    static const std::vector<std::string> kEmpty;
    return &kEmpty;
  }
  return nullptr;
}

bool SosModel::isEnumLiteral(std::string_view name) const {
  for (const auto& c : components) {
    for (const auto& a : c.attributes) {
      for (const auto& lit : a.enumValues) {
        if (lit == name) return true;
      }
    }
  }
  return false;
}

namespace {

Value defaultValue(const AttributeDecl& decl) {
  switch (decl.kind) {
    case AttrKind::Bool: return Value(false);
    case AttrKind::Int: return Value(static_cast<std::int64_t>(0));
    case AttrKind::Real: return Value(0.0);
    case AttrKind::Enum: return Value(Symbol{decl.enumValues.front()});
  }
  return Value(false);
}

void checkValueKind(const std::string& where, const AttributeDecl& decl,
                    const Value& v) {
  bool ok = false;
  switch (decl.kind) {
    case AttrKind::Bool: ok = v.isBool(); break;
    case AttrKind::Int: ok = v.isInt(); break;
    case AttrKind::Real: ok = v.isNumeric(); break;
    case AttrKind::Enum:
      ok = v.isSymbol() &&
           std::find(decl.enumValues.begin(), decl.enumValues.end(),
                     v.asSymbol().name) != decl.enumValues.end();
      break;
  }
  if (!ok) {
    throw SemanticError(where + ": value " + v.toString() +
                        " does not fit attribute '" + decl.name + "'");
  }
}

void checkDist(const std::string& where, const DistSpec& d) {
  auto requireFinite = [&](double x) {
    if (!std::isfinite(x)) throw SemanticError(where + ": non-finite distribution parameter");
  };
  switch (d.kind) {
    case DistSpec::Kind::None:
      break;
    case DistSpec::Kind::Fixed:
      requireFinite(d.a);
      break;
    case DistSpec::Kind::Uniform:
      requireFinite(d.a);
      requireFinite(d.b);
      if (d.a > d.b) throw SemanticError(where + ": uniform bounds out of order");
      break;
    case DistSpec::Kind::Exponential:
      requireFinite(d.a);
      if (d.a <= 0) throw SemanticError(where + ": exponential rate must be positive");
      break;
    case DistSpec::Kind::Normal:
      requireFinite(d.a);
      requireFinite(d.b);
      if (d.b < 0) throw SemanticError(where + ": normal sigma must be non-negative");
      break;
    case DistSpec::Kind::Bernoulli:
      requireFinite(d.a);
      if (d.a < 0 || d.a > 1) throw SemanticError(where + ": bernoulli p outside [0,1]");
      break;
  }
}

}  // namespace

StateValuation SosModel::initialState() const {
  StateValuation s;
  s.time = 0;
  s.layout = layout;
  s.values.reserve(layout->keys.size());
  for (const auto& inst : instances) {
    const ComponentType& type = typeOf(inst);
    for (const auto& attr : type.attributes) {
      const Value* over = nullptr;
      for (const auto& [n, v] : inst.overrides) {
        if (n == attr.name) over = &v;
      }
      if (over) {
        s.values.push_back(*over);
      } else if (attr.init) {
        s.values.push_back(*attr.init);
      } else {
        s.values.push_back(defaultValue(attr));
      }
    }
  }
  return s;
}

void SosModel::finalize() {
  // Component-level checks.
  std::unordered_set<std::string> typeNames;
  for (const auto& c : components) {
    if (!typeNames.insert(c.name).second) {
      throw SemanticError("duplicate component type '" + c.name + "'");
    }
    std::unordered_set<std::string> attrNames;
    for (const auto& a : c.attributes) {
      if (!attrNames.insert(a.name).second) {
        throw SemanticError("duplicate attribute '" + c.name + "." + a.name + "'");
      }
      if (a.kind == AttrKind::Enum && a.enumValues.empty()) {
        throw SemanticError("enum attribute '" + c.name + "." + a.name +
                            "' declares no literals");
      }
      checkDist("attribute '" + c.name + "." + a.name + "'", a.dist);
      if (a.init) checkValueKind("attribute '" + c.name + "." + a.name + "'", a, *a.init);
      if (a.dist.kind == DistSpec::Kind::Bernoulli &&
          !(a.kind == AttrKind::Bool ||
            (a.kind == AttrKind::Enum && a.enumValues.size() == 2))) {
        throw SemanticError("attribute '" + c.name + "." + a.name +
                            "': bernoulli needs a boolean or two-literal enum");
      }
      if ((a.dist.kind == DistSpec::Kind::Uniform ||
           a.dist.kind == DistSpec::Kind::Exponential ||
           a.dist.kind == DistSpec::Kind::Normal ||
           a.dist.kind == DistSpec::Kind::Fixed) &&
          !(a.kind == AttrKind::Real || a.kind == AttrKind::Int)) {
        throw SemanticError("attribute '" + c.name + "." + a.name +
                            "': numeric distribution on a non-numeric attribute");
      }
    }
    for (const auto& r : c.refs) {
      if (attrNames.count(r.name)) {
        throw SemanticError("ref '" + c.name + "." + r.name + "' collides with an attribute");
      }
      if (!r.targetType.empty() && !component(r.targetType)) {
        throw SemanticError("ref '" + c.name + "." + r.name +
                            "' targets unknown type '" + r.targetType + "'");
      }
    }
    if (!c.machine.states.empty()) {
      if (c.machine.initialState.empty()) {
        throw SemanticError("component '" + c.name + "' has no initial state");
      }
      std::unordered_set<std::string> stateNames(c.machine.states.begin(),
                                                 c.machine.states.end());
      if (stateNames.size() != c.machine.states.size()) {
        throw SemanticError("component '" + c.name + "' has duplicate states");
      }
      if (!stateNames.count(c.machine.initialState)) {
        throw SemanticError("component '" + c.name + "': initial state '" +
                            c.machine.initialState + "' is not declared");
      }
      for (const auto& t : c.machine.transitions) {
        if (!stateNames.count(t.from) || !stateNames.count(t.to)) {
          throw SemanticError("component '" + c.name + "': transition '" + t.name +
                              "' references an undeclared state");
        }
        checkDist("transition '" + c.name + "." + t.name + "' delay", t.delay);
      }
    }
  }

  // Instance table.
  std::unordered_set<std::string> ids;
  std::vector<std::string> keys;
  for (const auto& inst : instances) {
    if (!ids.insert(inst.id).second) {
      throw SemanticError("duplicate instance id '" + inst.id + "'");
    }
    const ComponentType* type = component(inst.type);
    if (!type) {
      throw SemanticError("instance '" + inst.id + "' has unknown type '" +
                          inst.type + "'");
    }
    for (const auto& [n, v] : inst.overrides) {
      const AttributeDecl* a = type->attribute(n);
      if (!a) {
        throw SemanticError("instance '" + inst.id + "' sets undeclared attribute '" +
                            n + "'");
      }
      checkValueKind("instance '" + inst.id + "'", *a, v);
    }
    for (const auto& [n, members] : inst.refs) {
      if (!type->ref(n)) {
        throw SemanticError("instance '" + inst.id + "' fills undeclared ref '" + n + "'");
      }
      (void)members;
    }
    for (const auto& a : type->attributes) keys.push_back(inst.id + "." + a.name);
  }

  // Ref targets and collections resolve against the instance table.
  for (const auto& inst : instances) {
    for (const auto& [n, members] : inst.refs) {
      for (const auto& m : members) {
        if (!ids.count(m)) {
          throw SemanticError("ref '" + inst.id + "." + n +
                              "' lists unknown instance '" + m + "'");
        }
      }
    }
  }
  std::unordered_set<std::string> collNames;
  for (const auto& [name, members] : collections) {
    if (!collNames.insert(name).second) {
      throw SemanticError("duplicate collection '" + name + "'");
    }
    for (const auto& m : members) {
      if (!ids.count(m)) {
        throw SemanticError("collection '" + name + "' lists unknown instance '" +
                            m + "'");
      }
    }
  }

  layout = Layout::fromKeys(std::move(keys));
}

}  // namespace sosmc
