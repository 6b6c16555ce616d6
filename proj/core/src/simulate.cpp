#include "sosmc/simulate.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "sosmc/errors.hpp"
#include "sosmc/ocl_eval.hpp"
#include "sosmc/rng.hpp"

namespace sosmc {

namespace {

struct EventKey {
  double time;
  std::size_t instance;
  std::size_t transition;

  bool operator<(const EventKey& o) const {
    if (time != o.time) return time < o.time;
    if (instance != o.instance) return instance < o.instance;
    return transition < o.transition;
  }
};

struct Engine {
  const SosModel& model;
  const SimConfig& config;
  Rng rng;

  StateValuation state;                      // the live valuation
  std::vector<std::size_t> machineState;    // per instance: state index
  std::vector<const ComponentType*> types;  // per instance
  std::set<EventKey> queue;
  // armed[i][t] = scheduled time of transition t of instance i, or NaN.
  std::vector<std::vector<double>> armed;
  std::size_t eventsAtCurrentTime = 0;

  explicit Engine(const SosModel& m, const SimConfig& c)
      : model(m), config(c), rng(c.seed) {}

  std::size_t stateIndex(const ComponentType& type, const std::string& name) const {
    for (std::size_t i = 0; i < type.machine.states.size(); ++i) {
      if (type.machine.states[i] == name) return i;
    }
    return 0;
  }

  Bindings selfBinding(std::size_t instIdx) const {
    return Bindings{{"self", model.instances[instIdx].id}};
  }

  bool guardHolds(std::size_t instIdx, const TransitionDecl& t) const {
    if (!t.guard) return true;
    return evalBool(t.guard, state, selfBinding(instIdx), &model);
  }

  /// Re-syncs one instance's armed transitions against the current state:
  /// newly enabled transitions draw a delay, disabled ones are canceled,
  /// already armed ones keep their scheduled time.
  void syncInstance(std::size_t instIdx, double now) {
    const ComponentType& type = *types[instIdx];
    if (type.machine.transitions.empty()) return;
    const std::string& current = type.machine.states[machineState[instIdx]];
    for (std::size_t t = 0; t < type.machine.transitions.size(); ++t) {
      const TransitionDecl& tr = type.machine.transitions[t];
      double& slot = armed[instIdx][t];
      bool inState = tr.from == current;
      bool enabled = inState && guardHolds(instIdx, tr);
      bool isArmed = !std::isnan(slot);
      if (enabled && !isArmed) {
        double delay = rng.draw(tr.delay);
        if (delay < 0) {
          throw SimError("transition '" + tr.name + "' drew a negative delay");
        }
        slot = now + delay;
        queue.insert({slot, instIdx, t});
      } else if (!enabled && isArmed) {
        queue.erase({slot, instIdx, t});
        slot = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }

  void syncAll(double now) {
    for (std::size_t i = 0; i < model.instances.size(); ++i) syncInstance(i, now);
  }

  /// Resolves an action target (self.attr, instance.attr, possibly through
  /// singleton refs) to a layout slot.
  std::size_t targetSlot(std::size_t instIdx, const std::vector<std::string>& path) {
    std::string current;
    std::size_t begin = 1;
    if (path.front() == "self") {
      current = model.instances[instIdx].id;
    } else {
      current = path.front();
    }
    for (; begin + 1 < path.size(); ++begin) {
      const auto* targets = model.instanceRef(current, path[begin]);
      if (!targets || targets->size() != 1) {
        throw SimError("action target navigates '" + path[begin] +
                       "' which is not a singleton ref on '" + current + "'");
      }
      current = targets->front();
    }
    auto slot = model.layout->find(current + "." + path.back());
    if (!slot) {
      throw SimError("action target '" + current + "." + path.back() +
                     "' is not an attribute");
    }
    return *slot;
  }

  void redrawStochasticAttributes(std::size_t instIdx) {
    const ComponentType& type = *types[instIdx];
    const std::string& id = model.instances[instIdx].id;
    for (const auto& attr : type.attributes) {
      if (attr.dist.kind == DistSpec::Kind::None) continue;
      auto slot = model.layout->find(id + "." + attr.name);
      state.values[*slot] = drawDistribution(attr.dist, attr, rng);
    }
  }

  void fire(std::size_t instIdx, std::size_t transIdx) {
    const ComponentType& type = *types[instIdx];
    const TransitionDecl& tr = type.machine.transitions[transIdx];
    redrawStochasticAttributes(instIdx);
    for (const auto& act : tr.actions) {
      Value v = evalValue(act.value, state, selfBinding(instIdx), &model);
      state.values[targetSlot(instIdx, act.target)] = v;
    }
    machineState[instIdx] = stateIndex(type, tr.to);
  }

  TimedTrace run() {
    // Initial valuation; stochastic attributes without an explicit
    // initial value are drawn, instance order then attribute order.
    state = model.initialState();
    std::size_t slot = 0;
    for (const auto& inst : model.instances) {
      const ComponentType& type = model.typeOf(inst);
      types.push_back(&type);
      machineState.push_back(
          type.machine.states.empty() ? 0 : stateIndex(type, type.machine.initialState));
      for (const auto& attr : type.attributes) {
        bool overridden = false;
        for (const auto& [n, v] : inst.overrides) {
          if (n == attr.name) overridden = true;
        }
        if (!overridden && !attr.init && attr.dist.kind != DistSpec::Kind::None) {
          state.values[slot] = drawDistribution(attr.dist, attr, rng);
        }
        ++slot;
      }
      armed.emplace_back(type.machine.transitions.size(),
                         std::numeric_limits<double>::quiet_NaN());
    }

    TimedTrace trace;
    trace.layout = model.layout;
    syncAll(0);

    double lastEmitted = -1;
    auto emit = [&](double t) {
      state.time = t;
      trace.samples.push_back(state);
      lastEmitted = t;
      if (trace.samples.size() > config.maxSamples) {
        throw SimError("maxSamples exceeded (" + std::to_string(config.maxSamples) +
                       "); livelock or horizon too long");
      }
    };

    // Events scheduled exactly at t=0 fold into the initial sample.
    processBatchAt(0);
    emit(0);

    while (!queue.empty()) {
      double t = queue.begin()->time;
      if (t > config.horizon) break;
      processBatchAt(t);
      emit(t);
    }
    if (lastEmitted < config.horizon) emit(config.horizon);
    return trace;
  }

  void processBatchAt(double t) {
    eventsAtCurrentTime = 0;
    while (!queue.empty() && queue.begin()->time == t) {
      EventKey ev = *queue.begin();
      queue.erase(queue.begin());
      armed[ev.instance][ev.transition] = std::numeric_limits<double>::quiet_NaN();
      if (++eventsAtCurrentTime > config.maxSamples) {
        throw SimError("maxSamples exceeded (" + std::to_string(config.maxSamples) +
                       " events at t=" + formatNumber(t) + "); livelock guard");
      }
      // Invariant: an armed event's guard held at the last sync. A firing
      // earlier in this batch may have just changed that.
      const TransitionDecl& tr = types[ev.instance]->machine.transitions[ev.transition];
      if (!guardHolds(ev.instance, tr)) {
        syncInstance(ev.instance, t);
        continue;
      }
      fire(ev.instance, ev.transition);
      syncAll(t);
    }
  }
};

}  // namespace

TimedTrace simulate(const SosModel& model, const SimConfig& config) {
  if (!(config.horizon > 0)) throw SimError("horizon must be positive");
  if (config.maxSamples == 0) throw SimError("maxSamples must be positive");
  Engine engine(model, config);
  TimedTrace trace = engine.run();
  validateTrace(trace);
  return trace;
}

}  // namespace sosmc
