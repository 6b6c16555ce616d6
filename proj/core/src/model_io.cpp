#include "sosmc/model_io.hpp"

#include <fstream>
#include <sstream>

#include "lexer.hpp"
#include "parse_internal.hpp"
#include "sosmc/errors.hpp"

namespace sosmc {

using detail::Cursor;
using detail::Tok;

namespace {

double parseSignedNumber(Cursor& cur) {
  bool neg = cur.tryPunct("-");
  double v = cur.expectNumber("a number");
  return neg ? -v : v;
}

Value parseLiteral(Cursor& cur, const AttributeDecl& decl) {
  if (cur.peek().isIdent("true") || cur.peek().isIdent("false")) {
    return Value(cur.next().text == "true");
  }
  if (cur.peek().kind == Tok::Ident) {
    return Value(Symbol{cur.next().text});
  }
  bool neg = cur.peek().isPunct("-");
  if (neg) cur.next();
  if (cur.peek().kind != Tok::Number) cur.fail("expected a literal value");
  const auto& tok = cur.next();
  double v = neg ? -tok.number : tok.number;
  if (decl.kind == AttrKind::Int && tok.integral) {
    return Value(static_cast<std::int64_t>(v));
  }
  if (tok.integral && decl.kind != AttrKind::Real) {
    return Value(static_cast<std::int64_t>(v));
  }
  return Value(v);
}

DistSpec parseDistSpec(Cursor& cur) {
  static const std::pair<std::string_view, DistSpec::Kind> kinds[] = {
      {"fixed", DistSpec::Kind::Fixed},
      {"uniform", DistSpec::Kind::Uniform},
      {"exponential", DistSpec::Kind::Exponential},
      {"normal", DistSpec::Kind::Normal},
      {"bernoulli", DistSpec::Kind::Bernoulli},
  };
  for (const auto& [name, kind] : kinds) {
    if (cur.peek().isIdent(name)) {
      cur.next();
      DistSpec d;
      d.kind = kind;
      cur.expectPunct("(");
      d.a = parseSignedNumber(cur);
      if (kind == DistSpec::Kind::Uniform || kind == DistSpec::Kind::Normal) {
        cur.expectPunct(",");
        d.b = parseSignedNumber(cur);
      }
      cur.expectPunct(")");
      return d;
    }
  }
  cur.fail("expected a distribution (fixed, uniform, exponential, normal, bernoulli)");
}

AttributeDecl parseAttribute(Cursor& cur) {
  AttributeDecl a;
  a.name = cur.expectName("attribute name");
  cur.expectPunct(":");
  std::string kind = cur.expectName("attribute type");
  if (kind == "boolean") {
    a.kind = AttrKind::Bool;
  } else if (kind == "integer") {
    a.kind = AttrKind::Int;
  } else if (kind == "real") {
    a.kind = AttrKind::Real;
  } else if (kind == "enum") {
    a.kind = AttrKind::Enum;
    cur.expectPunct("(");
    a.enumValues.push_back(cur.expectName("enum literal"));
    while (cur.tryPunct(",")) a.enumValues.push_back(cur.expectName("enum literal"));
    cur.expectPunct(")");
  } else {
    cur.fail("unknown attribute type '" + kind + "'");
  }
  if (cur.tryPunct("=")) a.init = parseLiteral(cur, a);
  if (cur.tryPunct("~")) a.dist = parseDistSpec(cur);
  return a;
}

std::vector<std::string> parseIdList(Cursor& cur) {
  std::vector<std::string> out;
  cur.expectPunct("[");
  if (!cur.peek().isPunct("]")) {
    out.push_back(cur.expectName("instance id"));
    while (cur.tryPunct(",")) out.push_back(cur.expectName("instance id"));
  }
  cur.expectPunct("]");
  return out;
}

std::vector<std::string> parseDottedName(Cursor& cur) {
  std::vector<std::string> steps;
  steps.push_back(cur.expectName("a name"));
  while (cur.tryPunct(".")) steps.push_back(cur.expectName("a name"));
  return steps;
}

TransitionDecl parseTransition(Cursor& cur, const TimeScale& scale) {
  TransitionDecl t;
  t.name = cur.expectName("transition name");
  cur.expectPunct(":");
  t.from = cur.expectName("source state");
  cur.expectPunct("->");
  t.to = cur.expectName("target state");
  bool haveDelay = false;
  while (true) {
    if (cur.tryIdent("guard")) {
      t.guard = detail::parseOclExpression(cur, scale);
    } else if (cur.tryIdent("delay")) {
      t.delay = parseDistSpec(cur);
      haveDelay = true;
    } else if (cur.tryIdent("do")) {
      do {
        ActionDecl act;
        act.target = parseDottedName(cur);
        cur.expectPunct(":=");
        act.value = detail::parseOclExpression(cur, scale);
        t.actions.push_back(std::move(act));
      } while (cur.tryPunct(","));
    } else {
      break;
    }
  }
  if (!haveDelay) cur.fail("transition '" + t.name + "' needs a delay");
  return t;
}

StateMachine parseMachine(Cursor& cur, const TimeScale& scale) {
  StateMachine m;
  cur.expectPunct("{");
  while (!cur.tryPunct("}")) {
    if (cur.tryIdent("initial")) {
      cur.expectIdent("state");
      if (!m.initialState.empty()) cur.fail("second initial state");
      m.initialState = cur.expectName("state name");
      m.states.push_back(m.initialState);
    } else if (cur.tryIdent("state")) {
      m.states.push_back(cur.expectName("state name"));
    } else if (cur.tryIdent("transition")) {
      m.transitions.push_back(parseTransition(cur, scale));
    } else {
      cur.fail("expected 'initial state', 'state' or 'transition'");
    }
  }
  return m;
}

ComponentType parseComponent(Cursor& cur, const TimeScale& scale) {
  ComponentType c;
  c.name = cur.expectName("component name");
  cur.expectPunct("{");
  while (!cur.tryPunct("}")) {
    if (cur.tryIdent("attribute")) {
      c.attributes.push_back(parseAttribute(cur));
    } else if (cur.tryIdent("ref")) {
      RefDecl r;
      r.name = cur.expectName("ref name");
      if (cur.tryPunct(":")) r.targetType = cur.expectName("target type");
      c.refs.push_back(std::move(r));
    } else if (cur.tryIdent("machine")) {
      c.machine = parseMachine(cur, scale);
    } else {
      cur.fail("expected 'attribute', 'ref' or 'machine'");
    }
  }
  return c;
}

Instance parseInstance(Cursor& cur, const SosModel& model) {
  Instance inst;
  inst.id = cur.expectName("instance id");
  cur.expectPunct(":");
  inst.type = cur.expectName("component type");
  if (cur.tryPunct("{")) {
    const ComponentType* type = model.component(inst.type);
    while (!cur.tryPunct("}")) {
      if (cur.tryIdent("set")) {
        std::string attr = cur.expectName("attribute name");
        cur.expectPunct("=");
        AttributeDecl fallback;
        fallback.kind = AttrKind::Real;
        const AttributeDecl* decl = type ? type->attribute(attr) : nullptr;
        inst.overrides.emplace_back(attr, parseLiteral(cur, decl ? *decl : fallback));
      } else if (cur.tryIdent("ref")) {
        std::string name = cur.expectName("ref name");
        cur.expectPunct("=");
        if (cur.peek().isPunct("[")) {
          inst.refs.emplace_back(name, parseIdList(cur));
        } else {
          inst.refs.emplace_back(name,
                                 std::vector<std::string>{cur.expectName("instance id")});
        }
      } else {
        cur.fail("expected 'set' or 'ref'");
      }
    }
  }
  return inst;
}

// Static name resolution for guards and actions. `selfType` is the owning
// component; quantifier binders are tracked but their element types are
// not, so their attribute steps are left to runtime checking.
void checkPath(const SosModel& model, const ComponentType& selfType,
               const std::vector<std::string>& steps,
               const std::vector<std::string>& binders, const std::string& where) {
  if (steps.empty()) return;
  const std::string& head = steps.front();
  const ComponentType* type = nullptr;
  std::size_t i = 1;
  if (head == "self") {
    type = &selfType;
  } else if (head == "SoS") {
    if (steps.size() >= 2 && !model.collection(steps[1])) {
      throw SemanticError(where + ": unknown collection '" + steps[1] + "'");
    }
    return;
  } else if (std::find(binders.begin(), binders.end(), head) != binders.end()) {
    return;  // element type unknown statically
  } else if (const Instance* inst = model.instance(head)) {
    type = &model.typeOf(*inst);
  } else if (steps.size() == 1 && model.isEnumLiteral(head)) {
    return;
  } else {
    throw SemanticError(where + ": unresolved name '" + head + "'");
  }
  for (; i < steps.size(); ++i) {
    const std::string& step = steps[i];
    if (const AttributeDecl* a = type->attribute(step)) {
      if (i + 1 != steps.size()) {
        throw SemanticError(where + ": attribute '" + step + "' has no members");
      }
      (void)a;
      return;
    }
    if (const RefDecl* r = type->ref(step)) {
      if (r->targetType.empty()) return;  // heterogeneous; runtime checked
      type = model.component(r->targetType);
      if (!type) return;
      continue;
    }
    throw SemanticError(where + ": undeclared attribute '" + step + "' on component '" +
                        type->name + "'");
  }
}

void checkExpr(const SosModel& model, const ComponentType& selfType,
               const OclExprPtr& e, std::vector<std::string>& binders,
               const std::string& where) {
  if (!e) return;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PathRef>) {
          checkPath(model, selfType, x.steps, binders, where);
        } else if constexpr (std::is_same_v<T, CollectionOp>) {
          checkPath(model, selfType, x.path.steps, binders, where);
        } else if constexpr (std::is_same_v<T, NaryBool>) {
          for (const auto& a : x.args) checkExpr(model, selfType, a, binders, where);
        } else if constexpr (std::is_same_v<T, NotExpr>) {
          checkExpr(model, selfType, x.arg, binders, where);
        } else if constexpr (std::is_same_v<T, ImpliesExpr>) {
          checkExpr(model, selfType, x.lhs, binders, where);
          checkExpr(model, selfType, x.rhs, binders, where);
        } else if constexpr (std::is_same_v<T, Compare>) {
          checkExpr(model, selfType, x.lhs, binders, where);
          checkExpr(model, selfType, x.rhs, binders, where);
        } else if constexpr (std::is_same_v<T, Arith>) {
          checkExpr(model, selfType, x.lhs, binders, where);
          checkExpr(model, selfType, x.rhs, binders, where);
        } else if constexpr (std::is_same_v<T, QuantExpr>) {
          checkPath(model, selfType, x.coll.steps, binders, where);
          binders.push_back(x.var);
          checkExpr(model, selfType, x.body, binders, where);
          binders.pop_back();
        } else if constexpr (std::is_same_v<T, RunAggExpr>) {
          throw SemanticError(where + ": run operators are not allowed in machines");
        } else if constexpr (std::is_same_v<T, AtExpr>) {
          throw SemanticError(where + ": run operators are not allowed in machines");
        }
      },
      e->node);
}

void validateMachineExpressions(const SosModel& model) {
  for (const auto& c : model.components) {
    for (const auto& t : c.machine.transitions) {
      std::vector<std::string> binders;
      std::string where = "component '" + c.name + "', transition '" + t.name + "'";
      if (t.guard) checkExpr(model, c, t.guard, binders, where + " guard");
      for (const auto& act : t.actions) {
        checkPath(model, c, act.target, binders, where + " action target");
        checkExpr(model, c, act.value, binders, where + " action");
      }
    }
  }
}

}  // namespace

SosModel loadModel(std::string_view text) {
  Cursor cur(detail::tokenize(text));
  SosModel model;
  cur.expectIdent("model");
  model.name = cur.expectName("model name");
  while (!cur.atEnd()) {
    if (cur.tryIdent("time")) {  // "time-unit" tokenizes as time - unit
      cur.expectPunct("-");
      cur.expectIdent("unit");
      std::string unit = cur.expectName("time unit");
      if (!isTimeUnit(unit)) cur.fail("unknown time unit '" + unit + "'");
      model.scale.baseUnit = unit;
    } else if (cur.tryIdent("component")) {
      model.components.push_back(parseComponent(cur, model.scale));
    } else if (cur.tryIdent("instance")) {
      model.instances.push_back(parseInstance(cur, model));
    } else if (cur.tryIdent("collection")) {
      std::string name = cur.expectName("collection name");
      cur.expectPunct("=");
      model.collections.emplace_back(name, parseIdList(cur));
    } else {
      cur.fail("expected 'time-unit', 'component', 'instance' or 'collection'");
    }
  }
  model.finalize();
  validateMachineExpressions(model);
  return model;
}

SosModel loadModelFile(const std::string& path) {
  return loadModel(readFile(path));
}

namespace {

void printDist(std::ostream& os, const DistSpec& d) {
  switch (d.kind) {
    case DistSpec::Kind::None: break;
    case DistSpec::Kind::Fixed: os << "fixed(" << formatNumber(d.a) << ")"; break;
    case DistSpec::Kind::Uniform:
      os << "uniform(" << formatNumber(d.a) << ", " << formatNumber(d.b) << ")";
      break;
    case DistSpec::Kind::Exponential:
      os << "exponential(" << formatNumber(d.a) << ")";
      break;
    case DistSpec::Kind::Normal:
      os << "normal(" << formatNumber(d.a) << ", " << formatNumber(d.b) << ")";
      break;
    case DistSpec::Kind::Bernoulli:
      os << "bernoulli(" << formatNumber(d.a) << ")";
      break;
  }
}

void printIdList(std::ostream& os, const std::vector<std::string>& ids) {
  os << '[';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ", ";
    os << ids[i];
  }
  os << ']';
}

}  // namespace

std::string saveModel(const SosModel& model) {
  std::ostringstream os;
  os << "model " << model.name << "\n";
  os << "time-unit " << model.scale.baseUnit << "\n\n";
  for (const auto& c : model.components) {
    os << "component " << c.name << " {\n";
    for (const auto& a : c.attributes) {
      os << "  attribute " << a.name << " : ";
      switch (a.kind) {
        case AttrKind::Bool: os << "boolean"; break;
        case AttrKind::Int: os << "integer"; break;
        case AttrKind::Real: os << "real"; break;
        case AttrKind::Enum: {
          os << "enum(";
          for (std::size_t i = 0; i < a.enumValues.size(); ++i) {
            if (i) os << ", ";
            os << a.enumValues[i];
          }
          os << ")";
          break;
        }
      }
      if (a.init) os << " = " << a.init->toString();
      if (a.dist.kind != DistSpec::Kind::None) {
        os << " ~ ";
        printDist(os, a.dist);
      }
      os << "\n";
    }
    for (const auto& r : c.refs) {
      os << "  ref " << r.name;
      if (!r.targetType.empty()) os << " : " << r.targetType;
      os << "\n";
    }
    if (!c.machine.states.empty()) {
      os << "  machine {\n";
      os << "    initial state " << c.machine.initialState << "\n";
      for (const auto& s : c.machine.states) {
        if (s != c.machine.initialState) os << "    state " << s << "\n";
      }
      for (const auto& t : c.machine.transitions) {
        os << "    transition " << t.name << " : " << t.from << " -> " << t.to << "\n";
        if (t.guard) os << "      guard " << printOcl(t.guard) << "\n";
        os << "      delay ";
        printDist(os, t.delay);
        os << "\n";
        if (!t.actions.empty()) {
          os << "      do ";
          for (std::size_t i = 0; i < t.actions.size(); ++i) {
            if (i) os << ", ";
            const auto& act = t.actions[i];
            for (std::size_t j = 0; j < act.target.size(); ++j) {
              if (j) os << '.';
              os << act.target[j];
            }
            os << " := " << printOcl(act.value);
          }
          os << "\n";
        }
      }
      os << "  }\n";
    }
    os << "}\n\n";
  }
  for (const auto& inst : model.instances) {
    os << "instance " << inst.id << " : " << inst.type;
    if (!inst.overrides.empty() || !inst.refs.empty()) {
      os << " {\n";
      for (const auto& [n, v] : inst.overrides) {
        os << "  set " << n << " = " << v.toString() << "\n";
      }
      for (const auto& [n, members] : inst.refs) {
        os << "  ref " << n << " = ";
        printIdList(os, members);
        os << "\n";
      }
      os << "}";
    }
    os << "\n";
  }
  os << "\n";
  for (const auto& [name, members] : model.collections) {
    os << "collection " << name << " = ";
    printIdList(os, members);
    os << "\n";
  }
  return os.str();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace sosmc
