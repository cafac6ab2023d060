#include <algorithm>
#include <map>
#include <string>

#include "doctest.h"
#include "errors.hpp"
#include "evaluate.hpp"
#include "interp.hpp"
#include "mutator.hpp"
#include "program.hpp"

using namespace chtest;

namespace {

const std::string kFixtures = CHTEST_FIXTURE_DIR;

Program adder() {
  return parseSnapshot({{"a.moo",
                         "class Adder {\n"
                         "  int add(int a, int b) { return a + b; }\n"
                         "}\n"
                         "class AdderTest {\n"
                         "  Adder a;\n"
                         "  void SetUp() { a = new Adder(); }\n"
                         "  void testAdd() { assert a.add(2, 3) == 5; }\n"
                         "}\n"}});
}

std::map<MutOp, int> countByOp(const std::vector<Mutant> &muts) {
  std::map<MutOp, int> out;
  for (const auto &m : muts)
    ++out[m.op];
  return out;
}

} // namespace

TEST_CASE("a single additive return yields exactly two mutants") {
  Program p = parseSnapshot(
      {{"one.moo", "class A { int add(int a, int b) { return a + b; } }"}});
  auto muts = generateMutants(p);
  REQUIRE(muts.size() == 2);

  // Statement operators come before the operators in their expression.
  CHECK(muts[0].mutantId == 0);
  CHECK(muts[0].op == MutOp::ReturnValueMutate);
  CHECK(muts[0].targetClass == "A");
  CHECK(muts[0].targetMethod == "add/2");

  CHECK(muts[1].mutantId == 1);
  CHECK(muts[1].op == MutOp::ArithmeticReplace);
  CHECK(muts[1].description.find("+") != std::string::npos);
  CHECK(muts[1].description.find("-") != std::string::npos);
}

TEST_CASE("empty bodies and bare returns yield nothing") {
  Program p = parseSnapshot({{"e.moo",
                              "class E {\n"
                              "  void nop() { }\n"
                              "  void ret() { return; }\n"
                              "  E give() { E x; return x; }\n"
                              "}\n"}});
  CHECK(generateMutants(p).empty());
}

TEST_CASE("operator catalogue covers every mutation kind") {
  Program p = parseSnapshot({{"cat.moo",
                              "class Cat {\n"
                              "  bool flag() { return true; }\n"
                              "  int pick(int x, int y) {\n"
                              "    if (x < y) { return x * y; }\n"
                              "    while (x > y) { x = x - 1; }\n"
                              "    return x;\n"
                              "  }\n"
                              "}\n"}});
  auto muts = generateMutants(p);
  auto counts = countByOp(muts);

  // flag: ReturnValueMutate(!r) + BooleanLiteralFlip.
  // pick: if-negate + boundary(<) + return-mutate(x*y) + arith(*),
  //       while-negate + boundary(>) + arith(-), return-mutate(x).
  CHECK(counts[MutOp::ReturnValueMutate] == 3);
  CHECK(counts[MutOp::BooleanLiteralFlip] == 1);
  CHECK(counts[MutOp::ConditionalNegate] == 2);
  CHECK(counts[MutOp::BoundaryShift] == 2);
  CHECK(counts[MutOp::ArithmeticReplace] == 2);
  CHECK(muts.size() == 10);

  // Ids are the enumeration ordinals.
  for (size_t i = 0; i < muts.size(); ++i)
    CHECK(muts[i].mutantId == static_cast<int>(i));
}

TEST_CASE("generation is deterministic and filtering keeps global ids") {
  Program p = parseSnapshotDir(kFixtures + "/dispatch_heavy");
  auto all1 = generateMutants(p);
  auto all2 = generateMutants(p);
  REQUIRE(all1.size() == all2.size());
  for (size_t i = 0; i < all1.size(); ++i) {
    CHECK(all1[i].mutantId == all2[i].mutantId);
    CHECK(all1[i].op == all2[i].op);
    CHECK(all1[i].targetClass == all2[i].targetClass);
    CHECK(all1[i].targetMethod == all2[i].targetMethod);
    CHECK(all1[i].description == all2[i].description);
  }

  auto calcOnly = generateMutants(p, std::set<std::string>{"Calc"});
  CHECK(!calcOnly.empty());
  CHECK(calcOnly.size() < all1.size());
  for (const auto &m : calcOnly) {
    CHECK(m.targetClass == "Calc");
    CHECK(all1[static_cast<size_t>(m.mutantId)].targetMethod ==
          m.targetMethod);
    CHECK(all1[static_cast<size_t>(m.mutantId)].op == m.op);
  }
}

TEST_CASE("applying a mutant changes behaviour as described") {
  Program p = adder();
  auto muts = generateMutants(p, std::set<std::string>{"Adder"});
  REQUIRE(muts.size() == 2);
  TestRef t{"AdderTest", "testAdd"};

  CHECK(runTest(p, t).status == TestStatus::Pass);

  for (const auto &m : muts) {
    Program mutated = applyMutant(p, m);
    TestOutcome o = runTest(mutated, t);
    CHECK(o.status == TestStatus::Fail); // 2-3 = -1, (2+3)+1 = 6; both != 5
  }

  // The original program is untouched by applyMutant.
  CHECK(runTest(p, t).status == TestStatus::Pass);
}

TEST_CASE("boolean literal flips invert behaviour") {
  Program p = parseSnapshot({{"b.moo",
                              "class Gate { bool open() { return true; } }\n"
                              "class GateTest {\n"
                              "  Gate g;\n"
                              "  void SetUp() { g = new Gate(); }\n"
                              "  void testOpen() { assert g.open(); }\n"
                              "}\n"}});
  auto muts = generateMutants(p, std::set<std::string>{"Gate"});
  bool sawFlip = false;
  for (const auto &m : muts) {
    if (m.op != MutOp::BooleanLiteralFlip)
      continue;
    sawFlip = true;
    CHECK(runTest(applyMutant(p, m), {"GateTest", "testOpen"}).status ==
          TestStatus::Fail);
  }
  CHECK(sawFlip);
}

TEST_CASE("applyMutant rejects unknown ordinals") {
  Program p = adder();
  Mutant bogus;
  bogus.mutantId = 9999;
  try {
    applyMutant(p, bogus);
    FAIL("expected UnknownChange");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::UnknownChange);
  }
}

TEST_CASE("kill matrix records statuses against a passing baseline") {
  Program p = parseSnapshot({{"k.moo",
                              "class Calc {\n"
                              "  int zero(int a) { return a * 0; }\n"
                              "}\n"
                              "class CalcTest {\n"
                              "  Calc c;\n"
                              "  void SetUp() { c = new Calc(); }\n"
                              "  void testZero() { assert c.zero(5) == 0; }\n"
                              "}\n"}});
  auto tests = discoverTests(p, {});
  auto muts = generateMutants(p, std::set<std::string>{"Calc"});
  KillMatrix matrix = buildKillMatrix(p, muts, tests);

  CHECK(matrix.mutants.size() == muts.size());
  CHECK(matrix.tests.size() == 1);
  CHECK(matrix.results.size() == muts.size());

  std::set<SubjectId> full = {"method:CalcTest.testZero/0"};
  // a * 0 -> a / 0 divides by zero: an Error outcome still kills.
  bool sawError = false;
  for (const auto &m : muts) {
    if (m.op == MutOp::ArithmeticReplace) {
      CHECK(matrix.results.at(m.mutantId).at(*full.begin()) ==
            TestStatus::Error);
      CHECK(matrix.killsMutant(m.mutantId, full));
      sawError = true;
    }
  }
  CHECK(sawError);
  CHECK(matrix.killedBy(full).size() == muts.size());
  CHECK(matrix.killedBy({}).empty());
  CHECK(matrix.coveredClasses(full) ==
        std::set<std::string>{"Calc", "CalcTest"});
}

TEST_CASE("a failing baseline aborts matrix construction") {
  Program p = parseSnapshot({{"f.moo",
                              "class C { int one() { return 1; } }\n"
                              "class CTest {\n"
                              "  void testBad() { assert 1 == 2; }\n"
                              "}\n"}});
  try {
    buildKillMatrix(p, generateMutants(p, std::set<std::string>{"C"}),
                    discoverTests(p, {}));
    FAIL("expected BaselineFailure");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::BaselineFailure);
    CHECK(std::string(e.what()).find("testBad") != std::string::npos);
  }
}

TEST_CASE("coverage counts only mutants in classes the suite executes") {
  Program p = parseSnapshot({{"cov.moo",
                              "class Hot { int f(int a) { return a + 1; } }\n"
                              "class Cold { int g(int a) { return a - 1; } }\n"
                              "class HotTest {\n"
                              "  Hot h;\n"
                              "  void SetUp() { h = new Hot(); }\n"
                              "  void testF() { assert h.f(1) == 2; }\n"
                              "}\n"}});
  auto tests = discoverTests(p, {});
  auto muts =
      generateMutants(p, std::set<std::string>{"Hot", "Cold"});
  KillMatrix matrix = buildKillMatrix(p, muts, tests);

  int hotMutants = 0, coldMutants = 0;
  for (const auto &m : muts)
    (m.targetClass == "Hot" ? hotMutants : coldMutants) += 1;
  REQUIRE(hotMutants > 0);
  REQUIRE(coldMutants > 0);

  std::set<SubjectId> suite = {"method:HotTest.testF/0"};
  CoverageStats s = mutationCoverage(matrix, suite);
  CHECK(s.introduced == hotMutants);
  CHECK(s.uncovered == coldMutants);
  CHECK(s.killed > 0);
  CHECK(s.coverage ==
        doctest::Approx(double(s.killed) / double(s.introduced)));

  CoverageStats none = mutationCoverage(matrix, {});
  CHECK(none.introduced == 0);
  CHECK(none.killed == 0);
  CHECK(none.coverage == 0.0);
  CHECK(none.uncovered == hotMutants + coldMutants);
}

TEST_CASE("suite comparison reports per-class rows and fixed CSV shape") {
  Program p = parseSnapshotDir(kFixtures + "/dispatch_heavy");
  auto tests = discoverTests(p, {});
  std::set<std::string> appClasses;
  for (const auto &c : p.ast.classes)
    if (!TestConfig{}.isTestClass(c.name))
      appClasses.insert(c.name);
  auto muts = generateMutants(p, appClasses);
  KillMatrix matrix = buildKillMatrix(p, muts, tests);

  std::set<SubjectId> full;
  for (const auto &t : tests)
    full.insert(t.methodId());
  std::map<std::string, std::set<SubjectId>> fullPerClass;
  for (const auto &m : muts)
    fullPerClass[m.targetClass] = full;

  // Degenerate reduced suites give a known classification split: B equals
  // the full suite, A is empty, so every class with kills improves.
  ComparisonReport r = compareSuites(matrix, full, {}, fullPerClass);
  CHECK(r.totalMutants == static_cast<int>(muts.size()));
  CHECK(r.totalKilledA == 0);
  CHECK(r.totalKilledB == r.totalKilledFull);
  CHECK(r.killedDifference == r.totalKilledFull);
  CHECK(r.meanReductionA == doctest::Approx(0.0));
  CHECK(r.meanReductionB == doctest::Approx(1.0));
  for (const auto &row : r.rows) {
    if (row.killedFull > 0)
      CHECK(row.classification == "improved");
    else
      CHECK(row.classification == "same");
  }

  std::string csv = r.csv();
  CHECK(csv.rfind("class,mutants,killed_full,killed_staticreduced,"
                  "killed_polyreduced,classification\n",
                  0) == 0);
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == r.rows.size() + 1);

  // Rows are sorted by class name.
  for (size_t i = 1; i < r.rows.size(); ++i)
    CHECK(r.rows[i - 1].className < r.rows[i].className);

  // Byte-stable across recomputation.
  ComparisonReport again = compareSuites(matrix, full, {}, fullPerClass);
  CHECK(again.csv() == csv);
  CHECK(again.summary() == r.summary());

  ComparisonReport swapped = compareSuites(matrix, full, fullPerClass, {});
  CHECK(swapped.killedDifference == -r.totalKilledFull);
  for (const auto &row : swapped.rows) {
    if (row.killedFull > 0)
      CHECK(row.classification == "worsened");
  }
}

TEST_CASE("evaluateSnapshot runs the whole pipeline deterministically") {
  Program p = parseSnapshotDir(kFixtures + "/dispatch_heavy");
  EvaluateResult r = evaluateSnapshot(p);

  CHECK(r.testClasses == 4);
  CHECK(r.testMethods == 10);
  CHECK(r.mutants > 0);
  CHECK(r.report.totalMutants == r.mutants);
  // The full suite reaches every application class here.
  CHECK(r.fullCoverage.uncovered == 0);
  CHECK(r.fullCoverage.introduced == r.mutants);

  // Reduced suites can never beat the full suite.
  for (const auto &row : r.report.rows) {
    CHECK(row.killedA <= row.killedFull);
    CHECK(row.killedB <= row.killedFull);
    CHECK(row.coverageA <= row.coverageFull + 1e-12);
    CHECK(row.coverageB <= row.coverageFull + 1e-12);
  }

  Program p2 = parseSnapshotDir(kFixtures + "/dispatch_heavy");
  EvaluateResult r2 = evaluateSnapshot(p2);
  CHECK(r2.report.csv() == r.report.csv());
  CHECK(r2.summaryText() == r.summaryText());

  // Same mode on both sides degenerates to a zero difference.
  EvaluateOptions same;
  same.modeB = same.modeA;
  EvaluateResult rSame = evaluateSnapshot(p, same);
  CHECK(rSame.report.killedDifference == 0);
  CHECK(rSame.report.meanReductionA ==
        doctest::Approx(rSame.report.meanReductionB));
}
