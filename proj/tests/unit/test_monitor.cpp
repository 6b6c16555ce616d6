#include <doctest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "sosmc/bltl_monitor.hpp"
#include "sosmc/errors.hpp"
#include "sosmc/gcsl_parser.hpp"

using namespace sosmc;
using testsupport::Gen;
using testsupport::Oracle;

namespace {

/// Eight samples at integer times; a/b hold at the listed times.
TimedTrace abTrace(std::vector<int> aTimes, std::vector<int> bTimes, int len = 10) {
  auto layout = Layout::fromKeys({"s.a", "s.b"});
  TimedTrace t;
  t.layout = layout;
  for (int i = 0; i < len; ++i) {
    StateValuation s;
    s.time = i;
    s.layout = layout;
    bool a = std::find(aTimes.begin(), aTimes.end(), i) != aTimes.end();
    bool b = std::find(bTimes.begin(), bTimes.end(), i) != bTimes.end();
    s.values = {Value(a), Value(b)};
    t.samples.push_back(std::move(s));
  }
  return t;
}

BltlPtr f(const std::string& text) { return parseBltl(text); }

}  // namespace

TEST_CASE("response formula holds when the trigger is answered in time") {
  // Trigger at t=1 answered at t=3: X<=1 jumps to t=2, F<=2 reaches t=3.
  TimedTrace t = abTrace({1}, {3});
  BltlPtr g = f("G<=5 ({s.a} => X<=1 F<=2 {s.b})");
  CHECK(check(g, t).holds);
  CHECK(Oracle(t, nullptr).holds(g));

  // Too late: the answer lands outside the F window.
  TimedTrace late = abTrace({1}, {6});
  CHECK_FALSE(check(g, late).holds);
  CHECK_FALSE(Oracle(late, nullptr).holds(g));

  // Trigger past the G bound needs no answer.
  TimedTrace outside = abTrace({7}, {});
  CHECK(check(g, outside).holds);
  CHECK(Oracle(outside, nullptr).holds(g));
}

TEST_CASE("globally over true always holds") {
  TimedTrace t = abTrace({}, {});
  CHECK(check(f("G<=5 true"), t).holds);
  CHECK(check(f("G<=end true"), t).holds);
}

TEST_CASE("next jumps to the last sample within the bound") {
  TimedTrace t = abTrace({2}, {0});
  CHECK(check(f("X<=2 {s.a}"), t).holds);        // lands exactly on t=2
  CHECK(check(f("X<=2.5 {s.a}"), t).holds);      // still the last within 2.5
  CHECK_FALSE(check(f("X<=3 {s.a}"), t).holds);  // moved past it
  CHECK(check(f("X<=0 {s.b}"), t).holds);        // X<=0 is the identity
}

TEST_CASE("until needs the left operand on the strict prefix") {
  TimedTrace t = abTrace({0, 1, 2}, {3});
  CHECK(check(f("({s.a} U<=4 {s.b})"), t).holds);
  TimedTrace gap = abTrace({0, 2}, {3});
  CHECK_FALSE(check(f("({s.a} U<=4 {s.b})"), gap).holds);
  // The witness sample itself is exempt from the left operand.
  TimedTrace atOnce = abTrace({}, {0});
  CHECK(check(f("({s.a} U<=4 {s.b})"), atOnce).holds);
}

TEST_CASE("weak until uses the right operand in its globally disjunct") {
  // Neither an until witness nor G(lhs): the table reading demands G(rhs).
  TimedTrace t = abTrace({0, 1, 2, 3, 4, 5, 6, 7}, {});
  BltlPtr w = f("({s.a} W<=4 {s.b})");
  CHECK_FALSE(check(w, t).holds);  // rhs never holds
  CheckOptions std_;
  std_.standardWeakUntil = true;
  CHECK(check(w, t, nullptr, std_).holds);  // lhs holds throughout
  CHECK(Oracle(t, nullptr, false).holds(w) == false);
  CHECK(Oracle(t, nullptr, true).holds(w) == true);
}

TEST_CASE("trace too short names the overrunning bounds") {
  TimedTrace t = abTrace({}, {}, 4);  // spans 3
  CHECK_THROWS_WITH_AS(check(f("G<=5 ({s.a} => X<=1 F<=2 {s.b})"), t),
                       doctest::Contains("G<=5 + X<=1 + F<=2"), TraceError);
  CHECK_NOTHROW(check(f("G<=3 {s.b} or G<=1 F<=2 {s.a}"), t));
}

TEST_CASE("occurrence counting follows rising edges") {
  // Holds on samples 0,1 and on 5 only.
  TimedTrace t = abTrace({0, 1, 5}, {}, 9);
  OclExprPtr prop = parseOclExpr("s.a");

  CHECK(occCount(prop, {}, 0, 8, t) == 2);  // contiguous start counts once
  CHECK(occCount(prop, {}, 0.5, 1.5, t) == 1);
  CHECK(occCount(prop, {}, 0.5, 3, t) == 1);
  CHECK(occCount(prop, {}, 1.5, 3, t) == 1);  // still inside the first run
  CHECK(occCount(prop, {}, 2, 4.5, t) == 0);
  CHECK(occCount(prop, {}, 2, 5, t) == 1);    // edge exactly at the window end
  CHECK(occCount(parseOclExpr("s.b"), {}, 0, 8, t) == 0);
  CHECK_THROWS_AS(occCount(prop, {}, 0, 9.5, t), TraceError);
}

TEST_CASE("occ predicates inside formulas re-base on the suffix") {
  TimedTrace t = abTrace({2, 3}, {}, 8);
  // At suffix t=1 the window [1, 3] sees one rising edge.
  CHECK(check(f("X<=1 (occ([s.a], 0, 2) >= 1)"), t).holds);
  CHECK(check(f("occ([s.a], 0, 7) <= 1"), t).holds);
}

TEST_CASE("run aggregates") {
  auto layout = Layout::fromKeys({"c.v"});
  TimedTrace t;
  t.layout = layout;
  for (int i = 0; i < 3; ++i) {
    StateValuation s;
    s.time = i;
    s.layout = layout;
    s.values = {Value(static_cast<double>(i + 1))};  // 1, 2, 3
    t.samples.push_back(std::move(s));
  }
  OclExprPtr v = parseOclExpr("c.v");
  CHECK(runAggregate(PathAgg::Sum, v, t, 0, 2) == doctest::Approx(6));
  CHECK(runAggregate(PathAgg::Mean, v, t, 0, 2) == doctest::Approx(2));
  CHECK(runAggregate(PathAgg::Prod, v, t, 0, 2) == doctest::Approx(6));
  CHECK(runAggregate(PathAgg::Sum, v, t, 0.5, 0.75) == 0);  // empty window
  CHECK_THROWS_AS(runAggregate(PathAgg::Mean, v, t, 0.5, 0.75), TraceError);
  CHECK_THROWS_AS(runAggregate(PathAgg::Prod, v, t, 0.5, 0.75), TraceError);

  CHECK(atValue(v, t, 1.5) == doctest::Approx(2));
  CHECK(check(f("run(mean(c.v) <= 2)"), t).holds);
  CHECK(check(f("run(at(c.v, 2) = 3)"), t).holds);
  CHECK(check(f("X<=1 run(mean(c.v) = 2.5)"), t).holds);  // suffix mean of 2,3
}

TEST_CASE("mean of a constant attribute is that constant") {
  auto layout = Layout::fromKeys({"c.v"});
  TimedTrace t;
  t.layout = layout;
  for (int i = 0; i < 5; ++i) {
    StateValuation s;
    s.time = i * 0.5;
    s.layout = layout;
    s.values = {Value(7.0)};
    t.samples.push_back(std::move(s));
  }
  CHECK(runAggregate(PathAgg::Mean, parseOclExpr("c.v"), t, 0, 2) ==
        doctest::Approx(7));
}

TEST_CASE("aggregates equal a scalar fold over sampled states") {
  Gen g(555);
  for (int round = 0; round < 100; ++round) {
    TimedTrace t = testsupport::randomTrace(g);
    OclExprPtr expr = parseOclExpr("a.x");
    double lo = t.startTime();
    double hi = t.endTime();
    double sum = 0;
    long long n = 0;
    for (const auto& s : t.samples) {
      if (s.time >= lo && s.time <= hi) {
        sum += s.at("a", "x").asNumber();
        ++n;
      }
    }
    CHECK(runAggregate(PathAgg::Sum, expr, t, lo, hi) == doctest::Approx(sum));
    CHECK(runAggregate(PathAgg::Mean, expr, t, lo, hi) ==
          doctest::Approx(sum / static_cast<double>(n)));
  }
}

TEST_CASE("metamorphic identities on random formulas and traces") {
  Gen g(2025);
  int rounds = 0;
  for (int i = 0; i < 400; ++i) {
    TimedTrace t = testsupport::randomTrace(g);
    double span = t.span();
    BltlPtr phi = testsupport::randomFormula(g, 2, span * 0.5);
    double k = g.real(0, span - requiredSpan(phi));

    // F<=k phi == (true U<=k phi)
    bool viaF = check(bltlFinally(k, phi), t).holds;
    bool viaU = check(bltlUntil(k, bltlTrue(), phi), t).holds;
    CHECK(viaF == viaU);

    // G<=k phi == not F<=k not phi
    bool viaG = check(bltlGlobally(k, phi), t).holds;
    bool viaNF = check(bltlNot(bltlFinally(k, bltlNot(phi))), t).holds;
    CHECK(viaG == viaNF);

    // Weak until equals its defining disjunction.
    BltlPtr psi = testsupport::randomFormula(g, 1, span - k);
    bool viaW = check(bltlWeakUntil(k, phi, psi), t).holds;
    bool viaDef =
        check(bltlOr({bltlUntil(k, phi, psi), bltlGlobally(k, psi)}), t).holds;
    CHECK(viaW == viaDef);

    // Monotonicity: shrinking a G bound preserves satisfaction.
    if (viaG) {
      CHECK(check(bltlGlobally(g.real(0, k), phi), t).holds);
    }
    ++rounds;
  }
  CHECK(rounds == 400);
}

TEST_CASE("checker agrees with the naive suffix-enumeration oracle") {
  Gen g(31337);
  for (int i = 0; i < 1500; ++i) {
    TimedTrace t = testsupport::randomTrace(g);
    BltlPtr phi = testsupport::randomFormula(g, 3, t.span());
    bool fast = check(phi, t).holds;
    bool slow = Oracle(t, nullptr).holds(phi);
    CHECK_MESSAGE(fast == slow, printBltl(phi));
  }
}

TEST_CASE("violated globally roots carry a first-violation diagnostic") {
  TimedTrace t = abTrace({0, 1, 3}, {}, 6);  // a fails at t=2
  Verdict v = check(f("G<=4 {s.a}"), t);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witnessTime.has_value());
  CHECK(*v.witnessTime == doctest::Approx(2));
  Verdict sp = check(f("{s.b}"), t);
  CHECK_FALSE(sp.holds);
  CHECK(sp.witnessTime.has_value());
}

TEST_CASE("split predicate accepts any sample split point") {
  // a holds on [0,3], b holds from 2 on: split at sample 2 works with the
  // subject true throughout.
  TimedTrace t = abTrace({0, 1, 2, 3, 4, 5, 6, 7}, {2, 3, 4, 5, 6, 7});
  CHECK(check(f("split([s.a], [s.a], [s.b], 0, 6)"), t).holds);
  // No split: b never holds, a holds everywhere (subject true, halves fail).
  TimedTrace none = abTrace({0, 1, 2, 3, 4, 5, 6, 7}, {});
  CHECK_FALSE(check(f("split([s.a], [s.a], [s.b], 0, 6)"), none).holds);
  // Vacuous when the subject fails somewhere in the window.
  TimedTrace vac = abTrace({0, 1}, {});
  CHECK(check(f("split([s.a], [s.a], [s.b], 0, 6)"), vac).holds);
}

TEST_CASE("formula text round trips") {
  for (const char* text :
       {"G<=30 ({s.a} => X<=0 F<=180 {s.b})", "(not {s.a} U<=5 false)",
        "occ([s.a], 0, 5) <= 2", "run(mean(s.a) <= 0.5)", "G<=end {s.a}",
        "split([s.a], [s.a], [s.b], 0, 6)",
        "{s.a} and {s.b} or true => X<=1 {s.b}"}) {
    BltlPtr a = parseBltl(text);
    BltlPtr b = parseBltl(printBltl(a));
    CHECK_MESSAGE(structurallyEqual(a, b), text);
  }
}
