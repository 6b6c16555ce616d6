#include "sosmc/rng.hpp"

#include <cmath>

#include "sosmc/errors.hpp"

namespace sosmc {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t deriveRunSeed(std::uint64_t seed, std::uint64_t runIndex) {
  return mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ull * (runIndex + 1)));
}

double Rng::exponential(double rate) {
  if (rate <= 0) throw SimError("exponential rate must be positive");
  double u = uniform01();
  return -std::log1p(-u) / rate;  // -ln(1-u), u in [0,1)
}

double Rng::normal(double mu, double sigma) {
  if (sigma < 0) throw SimError("normal sigma must be non-negative");
  // Box-Muller; one value per call keeps the stream position predictable.
  double u1 = 1.0 - uniform01();  // (0, 1]
  double u2 = uniform01();
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return mu + sigma * z;
}

double Rng::draw(const DistSpec& spec) {
  switch (spec.kind) {
    case DistSpec::Kind::Fixed: return spec.a;
    case DistSpec::Kind::Uniform: return uniform(spec.a, spec.b);
    case DistSpec::Kind::Exponential: return exponential(spec.a);
    case DistSpec::Kind::Normal: return normal(spec.a, spec.b);
    case DistSpec::Kind::Bernoulli: return bernoulli(spec.a) ? 1.0 : 0.0;
    case DistSpec::Kind::None: break;
  }
  throw SimError("draw from an unspecified distribution");
}

Value drawDistribution(const DistSpec& spec, const AttributeDecl& decl, Rng& rng) {
  if (spec.kind == DistSpec::Kind::Bernoulli) {
    bool hit = rng.bernoulli(spec.a);
    if (decl.kind == AttrKind::Bool) return Value(hit);
    if (decl.kind == AttrKind::Enum && decl.enumValues.size() == 2) {
      return Value(Symbol{decl.enumValues[hit ? 0 : 1]});
    }
    throw SimError("bernoulli draw needs a boolean or two-literal enum attribute");
  }
  double v = rng.draw(spec);
  switch (decl.kind) {
    case AttrKind::Real: return Value(v);
    case AttrKind::Int: return Value(static_cast<std::int64_t>(std::llround(v)));
    default:
      throw SimError("numeric draw into non-numeric attribute '" + decl.name + "'");
  }
}

}  // namespace sosmc
