#pragma once

#include <cstdint>

#include "sosmc/model.hpp"

namespace sosmc {

struct SimConfig {
  std::uint64_t seed = 0;
  double horizon = 0;               // trace covers [0, horizon], base units
  std::size_t maxSamples = 100000;  // livelock guard
};

/// Runs the model's stochastic state machines over [0, horizon] and
/// returns the sampled trace: one sample after each batch of same-time
/// events plus a terminal sample at the horizon. Pure function of
/// (model, config); the trace file it produces is byte-stable for a
/// fixed seed.
///
/// Scheduling: a transition is armed when its guard holds, with a firing
/// time drawn from its delay; it is disarmed when its guard turns false.
/// Events fire in (time, instance order, transition order) order. Firing
/// redraws the owner's stochastic attributes, applies actions in
/// declaration order, moves the machine, then every instance's arming is
/// re-synced against the new state.
///
/// Throws SimError when more than maxSamples samples (or more than
/// maxSamples events at one time point) are produced.
TimedTrace simulate(const SosModel& model, const SimConfig& config);

}  // namespace sosmc
