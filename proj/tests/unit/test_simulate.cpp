#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/model_io.hpp"
#include "sosmc/rng.hpp"
#include "sosmc/simulate.hpp"

using namespace sosmc;

namespace {

SosModel togglerModel(const std::string& delay = "exponential(1)") {
  return loadModel(
      "model toggle\n"
      "component T {\n"
      "  attribute on : boolean = false\n"
      "  machine {\n"
      "    initial state Run\n"
      "    transition flip : Run -> Run guard true delay " + delay +
      " do self.on := not self.on\n"
      "  }\n"
      "}\n"
      "instance t1 : T\n"
      "collection ts = [t1]\n");
}

}  // namespace

TEST_CASE("a fixed seed reproduces the trace byte for byte") {
  SosModel m = togglerModel();
  SimConfig cfg{.seed = 99, .horizon = 25, .maxSamples = 100000};
  TimedTrace a = simulate(m, cfg);
  TimedTrace b = simulate(m, cfg);
  CHECK(traceToString(a) == traceToString(b));
  CHECK(a.samples.size() > 2);

  SimConfig other = cfg;
  other.seed = 100;
  CHECK(traceToString(simulate(m, other)) != traceToString(a));
}

TEST_CASE("a horizon below the first delay yields only the endpoints") {
  SosModel m = togglerModel("fixed(1)");
  SimConfig cfg{.seed = 1, .horizon = 0.5, .maxSamples = 1000};
  TimedTrace t = simulate(m, cfg);
  REQUIRE(t.samples.size() == 2);
  CHECK(t.samples[0].time == 0);
  CHECK(t.samples[1].time == 0.5);
  CHECK(t.samples[0].at("t1", "on").asBool() == false);
  CHECK(t.samples[1].at("t1", "on").asBool() == false);
}

TEST_CASE("fixed delays land on a strict schedule") {
  SosModel m = togglerModel("fixed(2)");
  SimConfig cfg{.seed = 5, .horizon = 7, .maxSamples = 1000};
  TimedTrace t = simulate(m, cfg);
  REQUIRE(t.samples.size() == 5);  // 0, 2, 4, 6, horizon 7
  CHECK(t.samples[1].time == 2);
  CHECK(t.samples[1].at("t1", "on").asBool() == true);
  CHECK(t.samples[2].at("t1", "on").asBool() == false);
  CHECK(t.samples.back().time == 7);
}

TEST_CASE("zero delays trip the livelock guard") {
  SosModel m = togglerModel("fixed(0)");
  SimConfig cfg{.seed = 1, .horizon = 1, .maxSamples = 500};
  CHECK_THROWS_WITH_AS(simulate(m, cfg), doctest::Contains("maxSamples"), SimError);
}

TEST_CASE("stochastic attributes are redrawn on every firing") {
  SosModel m = loadModel(
      "model redraw\n"
      "component C {\n"
      "  attribute coin : boolean ~ bernoulli(0.7)\n"
      "  attribute flips : integer = 0\n"
      "  machine {\n"
      "    initial state Run\n"
      "    transition step : Run -> Run guard true delay fixed(1)\n"
      "      do self.flips := self.flips + 1\n"
      "  }\n"
      "}\n"
      "instance c1 : C\n"
      "collection cs = [c1]\n");
  SimConfig cfg{.seed = 2024, .horizon = 10000, .maxSamples = 20000};
  TimedTrace t = simulate(m, cfg);
  long long heads = 0, draws = 0;
  for (const auto& s : t.samples) {
    ++draws;
    if (s.at("c1", "coin").asBool()) ++heads;
  }
  REQUIRE(draws >= 10000);
  double freq = static_cast<double>(heads) / static_cast<double>(draws);
  double sigma = std::sqrt(0.7 * 0.3 / static_cast<double>(draws));
  CHECK(std::abs(freq - 0.7) < 3 * sigma);
}

TEST_CASE("guards gate transitions until another instance enables them") {
  SosModel m = loadModel(
      "model chain\n"
      "component A {\n"
      "  attribute go : boolean = false\n"
      "  machine {\n"
      "    initial state S\n"
      "    transition arm : S -> S guard self.go = false delay fixed(3)\n"
      "      do self.go := true\n"
      "  }\n"
      "}\n"
      "component B {\n"
      "  attribute seen : boolean = false\n"
      "  ref watched : A\n"
      "  machine {\n"
      "    initial state S\n"
      "    transition react : S -> S guard self.watched.go and self.seen = false\n"
      "      delay fixed(1) do self.seen := true\n"
      "  }\n"
      "}\n"
      "instance a1 : A\n"
      "instance b1 : B { ref watched = a1 }\n"
      "collection all = [a1, b1]\n");
  SimConfig cfg{.seed = 3, .horizon = 10, .maxSamples = 1000};
  TimedTrace t = simulate(m, cfg);
  // a1 fires at 3; b1's guard opens then, so it reacts at 4.
  CHECK(stateAt(t, 3.5).at("b1", "seen").asBool() == false);
  CHECK(stateAt(t, 4).at("b1", "seen").asBool() == true);
}

TEST_CASE("distribution draws match their first moments") {
  Rng rng(12345);
  SUBCASE("degenerate uniform") {
    for (int i = 0; i < 10; ++i) CHECK(rng.uniform(2, 2) == 2);
  }
  SUBCASE("exponential mean") {
    const double rate = 2.5;
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
    CHECK(std::abs(sum / n - 1.0 / rate) < 0.02 * (1.0 / rate));
  }
  SUBCASE("normal moments") {
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      double x = rng.normal(0, 1);
      sum += x;
      sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
  }
  SUBCASE("bernoulli frequency") {
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(0.25)) ++hits;
    }
    CHECK(std::abs(hits / static_cast<double>(n) - 0.25) < 0.01);
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(rng.exponential(0), SimError);
    CHECK_THROWS_AS(rng.normal(0, -1), SimError);
  }
}

TEST_CASE("derived run streams look independent") {
  // Adjacent base seeds and adjacent run indexes: bit agreement between the
  // two streams stays near one half.
  auto bitAgreement = [](std::uint64_t seedA, std::uint64_t seedB) {
    Rng a(seedA), b(seedB);
    long long same = 0;
    const int words = 2000;
    for (int i = 0; i < words; ++i) {
      same += 64 - __builtin_popcountll(a.nextBits() ^ b.nextBits());
    }
    return static_cast<double>(same) / (64.0 * words);
  };
  CHECK(std::abs(bitAgreement(deriveRunSeed(7, 0), deriveRunSeed(7, 1)) - 0.5) < 0.01);
  CHECK(std::abs(bitAgreement(deriveRunSeed(7, 0), deriveRunSeed(8, 0)) - 0.5) < 0.01);
  CHECK(deriveRunSeed(7, 0) != deriveRunSeed(7, 1));
  CHECK(deriveRunSeed(7, 0) != deriveRunSeed(8, 0));
}

TEST_CASE("typed attribute draws") {
  Rng rng(5);
  AttributeDecl coin{"face", AttrKind::Enum, {"heads", "tails"}, {}, {}};
  DistSpec bern{DistSpec::Kind::Bernoulli, 1.0, 0};
  CHECK(drawDistribution(bern, coin, rng).asSymbol().name == "heads");
  bern.a = 0.0;
  CHECK(drawDistribution(bern, coin, rng).asSymbol().name == "tails");
  AttributeDecl level{"level", AttrKind::Real, {}, {}, {}};
  DistSpec fixed{DistSpec::Kind::Fixed, 2.5, 0};
  CHECK(drawDistribution(fixed, level, rng).asNumber() == 2.5);
}

TEST_CASE("fire fixture simulates within its invariants") {
  SosModel m = testsupport::fireModel();
  SimConfig cfg{.seed = 11, .horizon = 120, .maxSamples = 100000};
  TimedTrace t = simulate(m, cfg);
  validateTrace(t);
  CHECK(t.samples.front().time == 0);
  CHECK(t.samples.back().time == 120);
  CHECK(t.samples.size() >= 121);  // daily headquarters tick
  // fireArea stays within [0, 10] summed over ten districts.
  for (const auto& s : t.samples) {
    double total = 0;
    for (int d = 1; d <= 10; ++d) {
      total += s.at("district_" + std::to_string(d), "fireArea").asNumber();
    }
    CHECK(total >= 0);
    CHECK(total <= 10);
  }
}

TEST_CASE("simulator rejects bad configurations") {
  SosModel m = togglerModel();
  CHECK_THROWS_AS(simulate(m, SimConfig{.seed = 1, .horizon = 0, .maxSamples = 10}),
                  SimError);
  CHECK_THROWS_AS(
      simulate(m, SimConfig{.seed = 1, .horizon = 5, .maxSamples = 0}), SimError);
}
