#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sosmc/ocl_ast.hpp"
#include "sosmc/time_unit.hpp"
#include "sosmc/value.hpp"

namespace sosmc {

enum class AttrKind { Bool, Int, Real, Enum };

/// Probability distribution attached to an attribute or a transition delay.
/// Parameters: Fixed(a), Uniform(a,b), Exponential(rate=a), Normal(mu=a,
/// sigma=b), Bernoulli(p=a).
struct DistSpec {
  enum class Kind { None, Fixed, Uniform, Exponential, Normal, Bernoulli };
  Kind kind = Kind::None;
  double a = 0;
  double b = 0;

  bool operator==(const DistSpec&) const = default;
};

struct AttributeDecl {
  std::string name;
  AttrKind kind = AttrKind::Bool;
  std::vector<std::string> enumValues;  // Enum only
  std::optional<Value> init;
  DistSpec dist;  // stochastic attribute: redrawn on every firing of the owner
};

/// Named reference slot holding an ordered list of instances, fixed at the
/// initial state.
struct RefDecl {
  std::string name;
  std::string targetType;
};

struct ActionDecl {
  std::vector<std::string> target;  // attribute path, `self.` or instance-rooted
  OclExprPtr value;
};

struct TransitionDecl {
  std::string name;
  std::string from;
  std::string to;
  OclExprPtr guard;  // null means always enabled
  DistSpec delay;    // firing delay after the transition becomes enabled
  std::vector<ActionDecl> actions;
};

struct StateMachine {
  std::vector<std::string> states;
  std::string initialState;
  std::vector<TransitionDecl> transitions;
};

struct ComponentType {
  std::string name;
  std::vector<AttributeDecl> attributes;
  std::vector<RefDecl> refs;
  StateMachine machine;

  const AttributeDecl* attribute(std::string_view name) const;
  const RefDecl* ref(std::string_view name) const;
};

struct Instance {
  std::string id;
  std::string type;
  std::vector<std::pair<std::string, Value>> overrides;
  std::vector<std::pair<std::string, std::vector<std::string>>> refs;
};

/// Dense slot layout over "instance.attribute" keys, shared by every
/// sample of a trace.
struct Layout {
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> index;

  static std::shared_ptr<const Layout> fromKeys(std::vector<std::string> keys);
  std::optional<std::size_t> find(std::string_view key) const;
};

/// Total valuation of all declared attributes at one time point.
struct StateValuation {
  double time = 0;
  std::shared_ptr<const Layout> layout;
  std::vector<Value> values;

  const Value* find(std::string_view instance, std::string_view attr) const;
  const Value& at(std::string_view instance, std::string_view attr) const;
};

/// Finite run: strictly increasing sample times, piecewise-constant and
/// left-closed in between.
struct TimedTrace {
  std::shared_ptr<const Layout> layout;
  std::vector<StateValuation> samples;

  double startTime() const { return samples.front().time; }
  double endTime() const { return samples.back().time; }
  double span() const { return endTime() - startTime(); }
};

/// Sample in effect at time t: the sample s_i with t_i <= t < t_{i+1},
/// or the last one at t = t_n. Throws TraceError outside [t_0, t_n].
const StateValuation& stateAt(const TimedTrace& trace, double t);
std::size_t sampleIndexAt(const TimedTrace& trace, double t);

/// Checks the trace invariants (non-empty, strictly increasing times,
/// total valuations); throws TraceError on violation.
void validateTrace(const TimedTrace& trace);

/// Static system description: component types with stochastic state
/// machines, the instance table, and the named root collections frozen at
/// the initial state. Immutable after loadModel and safe to share across
/// threads.
struct SosModel {
  std::string name;
  TimeScale scale;
  std::vector<ComponentType> components;
  std::vector<Instance> instances;
  std::vector<std::pair<std::string, std::vector<std::string>>> collections;

  std::shared_ptr<const Layout> layout;

  const ComponentType* component(std::string_view name) const;
  const Instance* instance(std::string_view id) const;
  std::size_t instanceIndex(std::string_view id) const;  // npos when absent
  const ComponentType& typeOf(const Instance& inst) const;
  const std::vector<std::string>* collection(std::string_view name) const;
  const std::vector<std::string>* instanceRef(std::string_view instanceId,
                                              std::string_view refName) const;
  bool isEnumLiteral(std::string_view name) const;

  /// Initial valuation: overrides win, then declared init, then the kind's
  /// default (false / 0 / first enum literal). Stochastic attributes
  /// without an explicit init are drawn by the simulator, not here; this
  /// function fills them with the default.
  StateValuation initialState() const;

  /// Rebuilds the layout and verifies all structural invariants.
  /// Throws SemanticError with the offending name on violation.
  void finalize();

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

}  // namespace sosmc
