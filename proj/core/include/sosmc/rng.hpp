#pragma once

#include <cstdint>
#include <random>

#include "sosmc/model.hpp"

namespace sosmc {

/// 64-bit finalizer (splitmix64). Used to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// Engine seed of run `runIndex` under base seed `seed`:
///   mix64( mix64(seed) ^ (0x9E3779B97F4A7C15 * (runIndex + 1)) )
/// Distinct runs (and adjacent base seeds) get decorrelated streams.
std::uint64_t deriveRunSeed(std::uint64_t seed, std::uint64_t runIndex);

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact
/// across platforms); the distribution transforms are inverse-CDF and
/// Box-Muller so drawn values do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t nextBits() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate);
  double normal(double mu, double sigma);
  bool bernoulli(double p) { return uniform01() < p; }

  /// Numeric draw from a distribution spec (bernoulli yields 0 or 1).
  double draw(const DistSpec& spec);

 private:
  std::mt19937_64 engine_;
};

/// Typed draw for a declared attribute; bernoulli maps true to the first
/// enum literal. Throws SimError for invalid parameter/kind pairings
/// (loadModel rejects them earlier).
Value drawDistribution(const DistSpec& spec, const AttributeDecl& decl, Rng& rng);

}  // namespace sosmc
