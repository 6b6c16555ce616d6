#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/gcsl_parser.hpp"
#include "sosmc/ocl_eval.hpp"

using namespace sosmc;
using testsupport::fireModel;

namespace {

SosModel districtModel() {
  return loadModel(
      "model city\n"
      "component District {\n"
      "  attribute population : integer = 0\n"
      "  attribute fireArea : real = 0\n"
      "}\n"
      "instance district_1 : District { set population = 500 }\n"
      "instance district_2 : District { set population = 1 }\n"
      "instance district_3 : District { set population = 2 }\n"
      "collection itsDistricts = [district_1, district_2, district_3]\n");
}

bool evalOn(const SosModel& m, const StateValuation& s, const std::string& text) {
  return evalBool(parseOclExpr(text), s, {}, &m);
}

}  // namespace

TEST_CASE("direct attribute lookup and comparison") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  CHECK(evalOn(m, s0, "district_1.population > 400"));
  CHECK_FALSE(evalOn(m, s0, "district_1.population > 500"));
  CHECK(evalOn(m, s0, "district_1.population = 500"));
}

TEST_CASE("forAll and exists over model collections") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  CHECK(evalOn(m, s0, "SoS.itsDistricts->forAll(d | d.fireArea >= 0)"));
  CHECK(evalOn(m, s0, "SoS.itsDistricts->exists(d | d.population = 1)"));
  CHECK_FALSE(evalOn(m, s0, "SoS.itsDistricts->exists(d | d.population > 1000)"));
}

TEST_CASE("station with more than two hosted cars exists in the fire model") {
  SosModel m = fireModel();
  StateValuation s0 = m.initialState();
  // Stations host 3/2/2 cars.
  CHECK(evalOn(m, s0,
               "SoS.itsFireStations->exists(f | f.hostedFireFightingCars->size() > 2)"));
  CHECK_FALSE(evalOn(
      m, s0, "SoS.itsFireStations->forAll(f | f.hostedFireFightingCars->size() > 2)"));
}

TEST_CASE("collection aggregation") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  CHECK(evalArith(parseOclExpr("SoS.itsDistricts.population->sum()"), s0, {}, &m) ==
        doctest::Approx(503));
  CHECK(evalArith(parseOclExpr("SoS.itsDistricts->size()"), s0, {}, &m) == 3);
}

TEST_CASE("empty collections: forAll true, exists false, size 0") {
  SosModel m = loadModel(
      "model empty\n"
      "component C { attribute v : real = 1 }\n"
      "instance c1 : C\n"
      "collection none = []\n"
      "collection one = [c1]\n");
  StateValuation s0 = m.initialState();
  CHECK(evalOn(m, s0, "SoS.none->forAll(x | x.v > 100)"));
  CHECK_FALSE(evalOn(m, s0, "SoS.none->exists(x | x.v > 0)"));
  CHECK(evalArith(parseOclExpr("SoS.none->size()"), s0, {}, &m) == 0);
  CHECK(evalArith(parseOclExpr("SoS.none.v->sum()"), s0, {}, &m) == 0);
}

TEST_CASE("bindings resolve free variables") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  Bindings b{{"d", "district_1"}};
  CHECK(evalBool(parseOclExpr("d.population = 500"), s0, b, &m));
}

TEST_CASE("evaluation errors") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  CHECK_THROWS_WITH_AS(evalOn(m, s0, "nosuch.population > 0"),
                       doctest::Contains("unresolved name"), EvalError);
  CHECK_THROWS_AS(evalOn(m, s0, "district_1.population = true"), EvalError);
  CHECK_THROWS_AS(evalOn(m, s0, "district_1.population / 0 > 1"), EvalError);
  CHECK_THROWS_AS(evalOn(m, s0, "mean(district_1.population) > 0"), EvalError);
  CHECK_THROWS_AS(evalOn(m, s0, "district_1.fireArea"), EvalError);  // not boolean
}

TEST_CASE("enum literals compare for equality only") {
  SosModel m = loadModel(
      "model enums\n"
      "component Coin { attribute face : enum(heads, tails) = tails }\n"
      "instance coin_1 : Coin\n"
      "collection cs = [coin_1]\n");
  StateValuation s0 = m.initialState();
  CHECK(evalOn(m, s0, "coin_1.face = tails"));
  CHECK_FALSE(evalOn(m, s0, "coin_1.face = heads"));
  CHECK_THROWS_AS(evalOn(m, s0, "coin_1.face < heads"), EvalError);
  CHECK_THROWS_WITH_AS(evalOn(m, s0, "coin_1.face = dragons"),
                       doctest::Contains("unresolved name"), EvalError);
}

TEST_CASE("De Morgan and double negation on random expressions") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  std::mt19937_64 rng(7);
  auto atom = [&](int pick) -> std::string {
    switch (pick % 4) {
      case 0: return "district_1.population > 250";
      case 1: return "district_2.population = 1";
      case 2: return "SoS.itsDistricts->exists(d | d.population > 400)";
      default: return "district_3.fireArea >= 1";
    }
  };
  for (int i = 0; i < 100; ++i) {
    // Unary not binds tighter than comparisons, so parenthesize the atoms.
    std::string a = "(" + atom(static_cast<int>(rng() % 4)) + ")";
    std::string b = "(" + atom(static_cast<int>(rng() % 4)) + ")";
    bool lhs = evalOn(m, s0, "not (" + a + " and " + b + ")");
    bool rhs = evalOn(m, s0, "not " + a + " or not " + b);
    CHECK(lhs == rhs);
    CHECK(evalOn(m, s0, "not not " + a) == evalOn(m, s0, a));
    CHECK(evalOn(m, s0, a + " implies " + b) ==
          evalOn(m, s0, "not " + a + " or " + b));
  }
}

TEST_CASE("aggregation equals a brute-force fold on random models") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 50; ++round) {
    int n = static_cast<int>(rng() % 5) + 1;
    std::string doc =
        "model rnd\ncomponent C { attribute v : integer = 0 }\n";
    std::vector<long long> values;
    std::string coll = "collection xs = [";
    for (int i = 0; i < n; ++i) {
      long long v = static_cast<long long>(rng() % 100);
      values.push_back(v);
      doc += "instance c" + std::to_string(i) + " : C { set v = " +
             std::to_string(v) + " }\n";
      coll += (i ? ", c" : "c") + std::to_string(i);
    }
    doc += coll + "]\n";
    SosModel m = loadModel(doc);
    StateValuation s0 = m.initialState();
    long long expect = 0;
    for (long long v : values) expect += v;
    CHECK(evalArith(parseOclExpr("SoS.xs.v->sum()"), s0, {}, &m) ==
          doctest::Approx(static_cast<double>(expect)));
    CHECK(evalArith(parseOclExpr("SoS.xs->size()"), s0, {}, &m) == n);
  }
}

TEST_CASE("evaluation is pure") {
  SosModel m = districtModel();
  StateValuation s0 = m.initialState();
  OclExprPtr e = parseOclExpr("SoS.itsDistricts.population->sum() > 500");
  bool first = evalBool(e, s0, {}, &m);
  for (int i = 0; i < 10; ++i) CHECK(evalBool(e, s0, {}, &m) == first);
}

TEST_CASE("model-free evaluation works off the trace layout alone") {
  TimedTrace t = parseTrace("0 c.v=3 c.flag=true\n");
  const StateValuation& s = t.samples[0];
  CHECK(evalBool(parseOclExpr("c.v > 2"), s));
  CHECK(evalBool(parseOclExpr("c.flag"), s));
  // Collections and refs need the model.
  CHECK_THROWS_WITH_AS(evalBool(parseOclExpr("SoS.cs->size() > 0"), s),
                       doctest::Contains("needs a model"), EvalError);
  CHECK_THROWS_AS(evalBool(parseOclExpr("c.other.v > 0"), s), EvalError);
}

TEST_CASE("singleton ref navigation") {
  SosModel m = fireModel();
  StateValuation s0 = m.initialState();
  CHECK(evalOn(m, s0, "district_1.east.onFire = false"));
  CHECK(evalOn(m, s0, "fireFightingCar1.beat1.fireArea = 0"));
}
