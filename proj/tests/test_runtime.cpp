#include <algorithm>
#include <string>

#include "doctest.h"
#include "interp.hpp"
#include "program.hpp"

using namespace chtest;

namespace {

const std::string kFixtures = CHTEST_FIXTURE_DIR;

TestOutcome runOne(const Program &p, const std::string &cls,
                   const std::string &method, RunOptions opts = {}) {
  return runTest(p, {cls, method}, opts);
}

bool traceHas(const TestOutcome &o, const std::string &runtimeClass,
              const std::string &name, const std::string &owner,
              bool viaSuper = false) {
  TraceEntry want{runtimeClass, name, 0, owner, viaSuper};
  return std::find(o.trace.begin(), o.trace.end(), want) != o.trace.end();
}

} // namespace

TEST_CASE("dynamic dispatch picks the override") {
  Program p = parseSnapshotDir(kFixtures + "/fig2");
  auto tests = discoverTests(p, {});
  REQUIRE(tests.size() == 1);
  CHECK(tests[0].className == "FooBarTest");
  CHECK(tests[0].methodName == "fooTest");

  TestOutcome o = runTest(p, tests[0]);
  CHECK(o.status == TestStatus::Pass);
  // The variable is declared as Foo but holds a Bar: the trace records
  // the body that actually ran.
  CHECK(traceHas(o, "Bar", "foo", "Bar"));
  CHECK_FALSE(traceHas(o, "Bar", "foo", "Foo"));
  CHECK(o.executedClasses == std::set<std::string>{"Bar", "FooBarTest"});
}

TEST_CASE("the harness dispatch of the test method is not traced") {
  Program p = parseSnapshotDir(kFixtures + "/fig2");
  TestOutcome o = runOne(p, "FooBarTest", "fooTest");
  for (const auto &e : o.trace)
    CHECK(e.identifier != "fooTest");
  CHECK(o.trace.size() == 1);
}

TEST_CASE("inherited dispatch resolves to the defining class") {
  Program p = parseSnapshotDir(kFixtures + "/fig4pre");
  TestOutcome o = runOne(p, "BaseTest", "testGetValue");
  CHECK(o.status == TestStatus::Pass);
  // b holds a Type1; getValue and the helper both live in Base.
  CHECK(traceHas(o, "Type1", "getValue", "Base"));
  CHECK(traceHas(o, "Type1", "getType1Value", "Base"));
  CHECK(o.executedClasses ==
        std::set<std::string>{"Base", "BaseTest", "Type1"});
}

TEST_CASE("abstract declarations are skipped at dispatch") {
  Program p = parseSnapshotDir(kFixtures + "/fig4post");
  TestOutcome o = runOne(p, "BaseTest", "testGetValue");
  CHECK(o.status == TestStatus::Pass);
  CHECK(traceHas(o, "Type1", "getValue", "Type1"));
}

TEST_CASE("super calls run the nearest concrete superclass body") {
  Program p = parseSnapshot({{"s.moo",
                              "class A { int m() { return 1; } }\n"
                              "class B extends A {\n"
                              "  int m() { return super.m() + 1; }\n"
                              "}\n"
                              "class BTest {\n"
                              "  B b;\n"
                              "  void SetUp() { b = new B(); }\n"
                              "  void testM() { assert b.m() == 2; }\n"
                              "}\n"}});
  TestOutcome o = runOne(p, "BTest", "testM");
  CHECK(o.status == TestStatus::Pass);
  CHECK(traceHas(o, "B", "m", "B", false));
  CHECK(traceHas(o, "B", "m", "A", true));
}

TEST_CASE("super honours the lexical definer, not the runtime class") {
  // C inherits B.m; super.m inside B must start above B even when the
  // receiver is a C.
  Program p = parseSnapshot({{"s.moo",
                              "class A { int m() { return 10; } }\n"
                              "class B extends A {\n"
                              "  int m() { return super.m() + 1; }\n"
                              "}\n"
                              "class C extends B { }\n"
                              "class CTest {\n"
                              "  C c;\n"
                              "  void SetUp() { c = new C(); }\n"
                              "  void testM() { assert c.m() == 11; }\n"
                              "}\n"}});
  TestOutcome o = runOne(p, "CTest", "testM");
  CHECK(o.status == TestStatus::Pass);
  CHECK(traceHas(o, "C", "m", "B", false));
  CHECK(traceHas(o, "C", "m", "A", true));
}

TEST_CASE("SetUp runs before the body, untraced, with both spellings") {
  Program p = parseSnapshot({{"s.moo",
                              "class Helper { int give() { return 5; } }\n"
                              "class UpperTest {\n"
                              "  int x;\n"
                              "  Helper h;\n"
                              "  void SetUp() { h = new Helper(); x = h.give(); }\n"
                              "  void testX() { assert x == 5; }\n"
                              "}\n"
                              "class LowerTest {\n"
                              "  int x;\n"
                              "  void setUp() { x = 7; }\n"
                              "  void testX() { assert x == 7; }\n"
                              "}\n"}});
  TestOutcome upper = runOne(p, "UpperTest", "testX");
  CHECK(upper.status == TestStatus::Pass);
  // give() ran during SetUp only: covered but not traced.
  CHECK(upper.trace.empty());
  CHECK(upper.executedClasses.count("Helper") == 1);

  TestOutcome lower = runOne(p, "LowerTest", "testX");
  CHECK(lower.status == TestStatus::Pass);
}

TEST_CASE("constructor bodies run on new and enter executedClasses") {
  Program p = parseSnapshot({{"c.moo",
                              "class Box {\n"
                              "  int v;\n"
                              "  Box(int start) { v = start; }\n"
                              "  int get() { return v; }\n"
                              "}\n"
                              "class BoxTest {\n"
                              "  void testBox() {\n"
                              "    Box b = new Box(41);\n"
                              "    assert b.get() == 41;\n"
                              "  }\n"
                              "}\n"}});
  TestOutcome o = runOne(p, "BoxTest", "testBox");
  CHECK(o.status == TestStatus::Pass);
  CHECK(o.executedClasses.count("Box") == 1);
}

TEST_CASE("fields default to zero, false, and null") {
  Program p = parseSnapshot({{"d.moo",
                              "class Defaults {\n"
                              "  int i;\n"
                              "  bool b;\n"
                              "  Defaults o;\n"
                              "  bool check() { return i == 0 && !b && o == null; }\n"
                              "}\n"
                              "class DefaultsTest {\n"
                              "  void testDefaults() {\n"
                              "    Defaults d = new Defaults();\n"
                              "    assert d.check();\n"
                              "  }\n"
                              "}\n"}});
  CHECK(runOne(p, "DefaultsTest", "testDefaults").status == TestStatus::Pass);
}

TEST_CASE("assertion failure is Fail, runtime faults are Error") {
  Program p = parseSnapshot({{"f.moo",
                              "class FTest {\n"
                              "  void testAssert() { assert 1 == 2; }\n"
                              "  void testDivZero() { int x; x = 1 / (1 - 1); assert true; }\n"
                              "  void testNullCall() { FTest t; t = null; assert t.helper() == 0; }\n"
                              "  int helper() { return 0; }\n"
                              "}\n"}});
  CHECK(runOne(p, "FTest", "testAssert").status == TestStatus::Fail);
  CHECK(!runOne(p, "FTest", "testAssert").message.empty());

  TestOutcome div = runOne(p, "FTest", "testDivZero");
  CHECK(div.status == TestStatus::Error);
  CHECK(div.message.find("division") != std::string::npos);

  CHECK(runOne(p, "FTest", "testNullCall").status == TestStatus::Error);
}

TEST_CASE("instantiating an abstract-effective class faults") {
  Program p = parseSnapshot({{"a.moo",
                              "class Shape { int area(); }\n"
                              "class ShapeTest {\n"
                              "  void testNew() {\n"
                              "    Shape s = new Shape();\n"
                              "    assert s == s;\n"
                              "  }\n"
                              "}\n"}});
  TestOutcome o = runOne(p, "ShapeTest", "testNew");
  CHECK(o.status == TestStatus::Error);
}

TEST_CASE("constructor arity mismatches fault at run time") {
  Program p = parseSnapshot({{"m.moo",
                              "class Plain { }\n"
                              "class PlainTest {\n"
                              "  void testNew() {\n"
                              "    Plain q = new Plain(5);\n"
                              "    assert q == q;\n"
                              "  }\n"
                              "}\n"}});
  CHECK(runOne(p, "PlainTest", "testNew").status == TestStatus::Error);
}

TEST_CASE("arithmetic wraps around instead of trapping") {
  Program p = parseSnapshot({{"w.moo",
                              "class WrapTest {\n"
                              "  void testWrap() {\n"
                              "    int x = 9223372036854775807;\n"
                              "    x = x + 1;\n"
                              "    assert x < 0;\n"
                              "  }\n"
                              "  void testDivOverflow() {\n"
                              "    int m = 0 - 9223372036854775807;\n"
                              "    m = m - 1;\n"
                              "    int y = m / (0 - 1);\n"
                              "    assert true;\n"
                              "  }\n"
                              "}\n"}});
  CHECK(runOne(p, "WrapTest", "testWrap").status == TestStatus::Pass);
  CHECK(runOne(p, "WrapTest", "testDivOverflow").status == TestStatus::Error);
}

TEST_CASE("the step budget stops runaway loops") {
  Program p = parseSnapshot({{"l.moo",
                              "class LoopTest {\n"
                              "  void testSpin() {\n"
                              "    int i = 0;\n"
                              "    while (i == 0) { i = i * 1; }\n"
                              "    assert true;\n"
                              "  }\n"
                              "}\n"}});
  RunOptions opts;
  opts.stepBudget = 500;
  TestOutcome o = runOne(p, "LoopTest", "testSpin", opts);
  CHECK(o.status == TestStatus::Error);
  CHECK(o.message.find("step") != std::string::npos);
  CHECK(o.stepCount <= 500 + 4);
}

TEST_CASE("reference equality and null comparisons") {
  Program p = parseSnapshot({{"e.moo",
                              "class Cell { }\n"
                              "class CellTest {\n"
                              "  void testIdentity() {\n"
                              "    Cell a = new Cell();\n"
                              "    Cell b = new Cell();\n"
                              "    Cell c = a;\n"
                              "    assert a == c;\n"
                              "    assert a != b;\n"
                              "    assert b != null;\n"
                              "    b = null;\n"
                              "    assert b == null;\n"
                              "  }\n"
                              "  void testMixed() {\n"
                              "    Cell a = new Cell();\n"
                              "    assert a == 1;\n"
                              "  }\n"
                              "}\n"}});
  CHECK(runOne(p, "CellTest", "testIdentity").status == TestStatus::Pass);
  // Comparing a reference with an integer is a fault, not false.
  CHECK(runOne(p, "CellTest", "testMixed").status == TestStatus::Error);
}

TEST_CASE("short-circuit evaluation guards the right operand") {
  Program p = parseSnapshot({{"sc.moo",
                              "class G {\n"
                              "  int boom() { return 1 / (1 - 1); }\n"
                              "}\n"
                              "class GTest {\n"
                              "  G g;\n"
                              "  void SetUp() { g = new G(); }\n"
                              "  void testAnd() { assert !(false && g.boom() == 0); }\n"
                              "  void testOr() { assert true || g.boom() == 0; }\n"
                              "}\n"}});
  CHECK(runOne(p, "GTest", "testAnd").status == TestStatus::Pass);
  CHECK(runOne(p, "GTest", "testOr").status == TestStatus::Pass);
}

TEST_CASE("discoverTests matches both names against the configuration") {
  Program p = parseSnapshot({{"t.moo",
                              "class Thing { int testLooking() { return 1; } }\n"
                              "class ThingTest {\n"
                              "  void testReal() { assert true; }\n"
                              "  void helper() { }\n"
                              "  int testWithArg(int x) { return x; }\n"
                              "}\n"}});
  auto tests = discoverTests(p, {});
  REQUIRE(tests.size() == 1);
  CHECK(tests[0].methodId() == "method:ThingTest.testReal/0");
}

TEST_CASE("runSuite is deterministic") {
  Program p = parseSnapshotDir(kFixtures + "/dispatch_heavy");
  auto tests = discoverTests(p, {});
  REQUIRE(tests.size() == 10);
  auto a = runSuite(p, tests);
  auto b = runSuite(p, tests);
  REQUIRE(a.size() == b.size());
  for (const auto &[id, oa] : a) {
    const TestOutcome &ob = b.at(id);
    CHECK(oa.status == ob.status);
    CHECK(oa.trace == ob.trace);
    CHECK(oa.executedClasses == ob.executedClasses);
    CHECK(oa.stepCount == ob.stepCount);
  }
}

TEST_CASE("dynamicRelevantTests keys on the resolved body") {
  Program p = parseSnapshotDir(kFixtures + "/fig2");
  auto outcomes = runSuite(p, discoverTests(p, {}));
  CHECK(dynamicRelevantTests(outcomes, "Bar", "foo", 0) ==
        std::set<SubjectId>{"method:FooBarTest.fooTest/0"});
  CHECK(dynamicRelevantTests(outcomes, "Foo", "foo", 0).empty());
  CHECK(dynamicRelevantTests(outcomes, "Bar", "foo", 1).empty());
}

TEST_CASE("runMethodForValue probes integer results") {
  Program p = parseSnapshot({{"v.moo",
                              "class Probe {\n"
                              "  int give() { return 42; }\n"
                              "  bool flag() { return true; }\n"
                              "  int boom() { return 1 / (1 - 1); }\n"
                              "}\n"}});
  CHECK(runMethodForValue(p, "Probe", "give") == 42);
  CHECK_FALSE(runMethodForValue(p, "Probe", "flag").has_value());
  CHECK_FALSE(runMethodForValue(p, "Probe", "boom").has_value());
  CHECK_FALSE(runMethodForValue(p, "Probe", "missing").has_value());
}
