#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "sosmc/bltl_monitor.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/gcsl_parser.hpp"
#include "sosmc/model_io.hpp"
#include "sosmc/ocl_eval.hpp"
#include <functional>

#include "sosmc/translate.hpp"

using namespace sosmc;
using testsupport::fireModel;
using testsupport::Gen;

namespace {
const TimeScale kDays{"day"};

PatternExpr pat(const std::string& text) { return parsePattern(text, kDays); }
}  // namespace

TEST_CASE("universal quantification unfolds to a conjunction in order") {
  SosModel m = fireModel();
  PropertyPtr p = parseProperty(
      "SoS.itsFireStations->forAll(x | always [x.staffed])", kDays);
  PropertyPtr u = unfold(p, m);
  const auto* conn = std::get_if<PropConnective>(&u->node);
  REQUIRE(conn);
  CHECK(conn->conjunction);
  REQUIRE(conn->parts.size() == 3);
  const auto* first = std::get_if<PatternExpr>(&conn->parts[0]->node);
  REQUIRE(first);
  CHECK(printOcl(first->prop) == "fireStation_1.staffed");
  const auto* last = std::get_if<PatternExpr>(&conn->parts[2]->node);
  REQUIRE(last);
  CHECK(printOcl(last->prop) == "fireStation_3.staffed");
}

TEST_CASE("empty collections unfold to boolean constants") {
  SosModel m = loadModel(
      "model empty\n"
      "component C { attribute p : boolean = false }\n"
      "instance c1 : C\n"
      "collection none = []\n");
  OclExprPtr all = unfoldOcl(parseOclExpr("SoS.none->forAll(x | x.p)"), m);
  OclExprPtr some = unfoldOcl(parseOclExpr("SoS.none->exists(x | x.p)"), m);
  CHECK(std::get<BoolLit>(all->node).value == true);
  CHECK(std::get<BoolLit>(some->node).value == false);
}

TEST_CASE("unresolved collections are reported") {
  SosModel m = fireModel();
  CHECK_THROWS_WITH_AS(
      unfold(parseProperty("SoS.nowhere->forAll(x | always [x.p])", kDays), m),
      doctest::Contains("unresolved collection"), SemanticError);
}

TEST_CASE("nested unfolding matches the brute-force cross product") {
  Gen g(4242);
  for (int round = 0; round < 60; ++round) {
    SosModel m = testsupport::randomSmallModel(g);
    // exists(u in grp, forAll(v in sub, u.p or v.p)) as a plain OCL formula.
    OclExprPtr e = parseOclExpr(
        "SoS.grp->exists(u | SoS.sub->forAll(v | u.p or v.p))");
    OclExprPtr unfolded = unfoldOcl(e, m);

    // Brute force over the instance tables on a random state.
    StateValuation s = testsupport::randomModelTrace(g, m, 1).samples[0];
    bool expect = false;
    for (const auto& u : *m.collection("grp")) {
      bool inner = true;
      for (const auto& v : *m.collection("sub")) {
        bool up = s.at(u, "p").asBool();
        bool vp = s.at(v, "p").asBool();
        if (!(up || vp)) inner = false;
      }
      if (inner) expect = true;
    }
    CHECK(evalBool(unfolded, s, {}, &m) == expect);
  }
}

TEST_CASE("pattern rows produce the expected formula shapes") {
  TranslateOptions o;
  CHECK(printBltl(translatePattern(pat("always [x.p]"), 10, o)) == "G<=10 {x.p}");
  CHECK(printBltl(translatePattern(pat("whenever [x.p] occurs [x.q] holds"), 10, o)) ==
        "G<=10 ({x.p} => {x.q})");
  CHECK(printBltl(translatePattern(
            pat("whenever [x.p] occurs [x.q] holds during following [1 - 3]"), 10,
            o)) == "G<=7 ({x.p} => X<=1 G<=2 {x.q})");
  CHECK(printBltl(translatePattern(
            pat("whenever [x.p] occurs [x.q] implies [x.r] during following "
                "[1 - 3]"),
            10, o)) == "G<=7 ({x.p} => X<=1 G<=2 ({x.q} => {x.r}))");
  CHECK(printBltl(translatePattern(
            pat("whenever [x.p] occurs [x.q] does not occur during following "
                "[1 - 3]"),
            10, o)) == "G<=7 ({x.p} => X<=1 G<=2 not {x.q})");
  CHECK(printBltl(translatePattern(
            pat("whenever [x.p] occurs [x.q] occurs within [2 - 6]"), 10, o)) ==
        "G<=4 ({x.p} => X<=2 F<=4 {x.q})");
  CHECK(printBltl(translatePattern(
            pat("[x.p] occurs [2] times during [1 - 5] raises [x.q]"), 10, o)) ==
        "occ([x.p], 1, 5) >= 2 => X<=5 F<=5 {x.q}");
  CHECK(printBltl(translatePattern(pat("[x.p] occurs at most [2] times during "
                                       "[0 - 5]"),
                                   10, o)) == "occ([x.p], 0, 5) <= 2");
  CHECK(printBltl(translatePattern(pat("[x.p] during [1 - 4] raises [x.q]"), 10,
                                   o)) == "X<=1 G<=3 {x.p} => X<=4 {x.q}");
  CHECK(printBltl(translatePattern(
            pat("[x.p] during [1 - 7] implies [x.q] during [1 - 3] then [x.r] "
                "during [3 - 7]"),
            10, o)) ==
        "X<=1 G<=6 {x.p} => X<=1 G<=2 {x.q} and X<=3 G<=4 {x.r}");
  CHECK(printBltl(translatePattern(pat("[x.p] implies [x.q] holds forever"), 10,
                                   o)) == "G<=10 ({x.p} => G<=end {x.q})");
}

TEST_CASE("unbound interval ends borrow the verification horizon") {
  BltlPtr f = translatePattern(
      pat("whenever [x.p] occurs [x.q] does not occur during following [2 - +inf)"),
      10, {});
  CHECK(printBltl(f) == "G<=0 ({x.p} => X<=2 G<=8 not {x.q})");
}

TEST_CASE("consistency conditions reject bad intervals with their text") {
  CHECK_THROWS_WITH_AS(
      translatePattern(pat("whenever [x.p] occurs [x.q] occurs within [0 - 15]"),
                       10, {}),
      doctest::Contains("a <= b <= k"), SemanticError);
  CHECK_THROWS_WITH_AS(
      translatePattern(pat("[x.p] during [1 - 14] raises [x.q]"), 10, {}),
      doctest::Contains("a <= b <= k"), SemanticError);
  CHECK_THROWS_WITH_AS(
      translatePattern(
          pat("[x.p] during [2 - 7] implies [x.q] during [2 - 3] then [x.r] "
              "during [4 - 7]"),
          10, {}),
      doctest::Contains("share their bounds"), SemanticError);
  CHECK_THROWS_AS(translatePattern(pat("always [x.p]"), 0, {}), SemanticError);
}

TEST_CASE("existential split swaps in the procedural predicate") {
  TranslateOptions opts;
  opts.existentialSplit = true;
  BltlPtr f = translatePattern(
      pat("[x.p] during [1 - 7] implies [x.q] during [1 - 3] then [x.r] during "
          "[3 - 7]"),
      10, opts);
  CHECK(printBltl(f) == "split([x.p], [x.q], [x.r], 1, 7)");
}

TEST_CASE("X<=0 artifacts are kept by default and removed by simplify") {
  BltlPtr f = translatePattern(
      pat("whenever [x.p] occurs [x.q] occurs within [6]"), 10, {});
  CHECK(printBltl(f) == "G<=4 ({x.p} => X<=0 F<=6 {x.q})");
  CHECK(printBltl(simplifyFormula(f)) == "G<=4 ({x.p} => F<=6 {x.q})");
}

TEST_CASE("simplify folds constants and flattens connectives") {
  BltlPtr f = parseBltl("(true => (not not {x.p} and (true and {x.q})))");
  CHECK(printBltl(simplifyFormula(f)) == "{x.p} and {x.q}");
  CHECK(printBltl(simplifyFormula(parseBltl("false => {x.p}"))) == "true");
  CHECK(printBltl(simplifyFormula(parseBltl("X<=0 X<=0 {x.p}"))) == "{x.p}");
}

TEST_CASE("contracts compose assumption and goal with implication") {
  SosModel m = fireModel();
  auto withA = parseContracts(
      "v contract C Assumption: always [fireHQ.alarm = false] Goal: always "
      "[district_1.onFire = false] Confidence: 0.5",
      kDays);
  BltlPtr f = translateContract(withA[0], 10, m);
  CHECK(printBltl(f) ==
        "G<=10 {fireHQ.alarm = false} => G<=10 {district_1.onFire = false}");

  auto noA = parseContracts(
      "v contract C Goal: always [district_1.onFire = false] Confidence: 0.5",
      kDays);
  CHECK(printBltl(translateContract(noA[0], 10, m)) ==
        "G<=10 {district_1.onFire = false}");
}

TEST_CASE("structural goals become a state predicate at the initial sample") {
  SosModel m = fireModel();
  auto cs = parseContracts(testsupport::fixtureText("reqs.gcsl"), kDays);
  BltlPtr f = translateContract(cs[0], 210, m);
  REQUIRE(std::holds_alternative<StatePred>(f->node));
  // On this instance table no district hosts two stations, so the
  // antecedent is false and the requirement holds at the initial state.
  TimedTrace t;
  t.layout = m.layout;
  StateValuation s0 = m.initialState();
  s0.layout = m.layout;
  t.samples = {s0};
  CHECK(check(f, t, &m).holds);
}

TEST_CASE("run-operator goals become run predicates, not state predicates") {
  SosModel m = fireModel();
  auto cs = parseContracts(testsupport::fixtureText("req2.gcsl"), kDays);
  BltlPtr f = translateContract(cs[0], 120, m);
  CHECK(std::holds_alternative<AggPred>(f->node));
  CHECK(printBltl(f) == "run(mean(SoS.itsDistricts.fireArea->sum()) <= 1e-04)");
}

TEST_CASE("the fire requirement expands into the three-station conjunction") {
  SosModel m = fireModel();
  auto cs = parseContracts(testsupport::fixtureText("req3.gcsl"), kDays);
  BltlPtr f = translateContract(cs[0], 210, m);
  const auto* top = std::get_if<BAnd>(&f->node);
  REQUIRE(top);
  REQUIRE(top->args.size() == 3);
  std::string first = printBltl(top->args[0]);
  CHECK(first.find("G<=30") == 0);
  CHECK(first.find("fireFightingCar1.isAtFireStation or "
                    "fireFightingCar2.isAtFireStation or "
                    "fireFightingCar3.isAtFireStation") != std::string::npos);
  CHECK(first.find("X<=0 F<=180") != std::string::npos);
  std::string second = printBltl(top->args[1]);
  CHECK(second.find("fireFightingCar4") != std::string::npos);
  CHECK(second.find("fireFightingCar5") != std::string::npos);
  CHECK(second.find("fireFightingCar1") == std::string::npos);
}

TEST_CASE("unfolded verdicts equal direct quantifier iteration") {
  Gen g(777);
  const double k = 10;
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    SosModel m = testsupport::randomSmallModel(g);
    PropertyPtr prop = testsupport::randomQuantifiedProperty(g, k);
    TimedTrace trace = testsupport::randomModelTrace(g, m, k + 1);

    BltlPtr viaUnfold = translateProperty(prop, k, m);
    bool a = check(viaUnfold, trace, &m).holds;

    // Direct route: iterate quantifiers at monitor level.
    std::function<bool(const PropertyPtr&, Bindings&)> direct =
        [&](const PropertyPtr& p, Bindings& binds) -> bool {
      if (const auto* q = std::get_if<Quantified>(&p->node)) {
        const auto* members = m.collection(q->collection.steps[1]);
        REQUIRE(members);
        bool all = true, any = false;
        for (const auto& id : *members) {
          binds[q->var] = id;
          bool b = direct(q->body, binds);
          all = all && b;
          any = any || b;
        }
        binds.erase(q->var);
        return q->forAll ? all : any;
      }
      if (const auto* pt = std::get_if<PatternExpr>(&p->node)) {
        PatternExpr bound = *pt;
        for (const auto& [var, id] : binds) {
          bound.prop = bound.prop ? substituteVar(bound.prop, var, id) : bound.prop;
          bound.prop1 =
              bound.prop1 ? substituteVar(bound.prop1, var, id) : bound.prop1;
          bound.prop2 =
              bound.prop2 ? substituteVar(bound.prop2, var, id) : bound.prop2;
        }
        return check(translatePattern(bound, k, {}), trace, &m).holds;
      }
      const auto& e = std::get<OclExprPtr>(p->node);
      return evalBool(e, trace.samples[0], binds, &m);
    };
    Bindings binds;
    bool b = direct(prop, binds);
    CHECK_MESSAGE(a == b, prettyPrint(prop, kDays));
    ++checked;
  }
  CHECK(checked == 150);
}
