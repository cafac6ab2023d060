#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "interp.hpp"
#include "program.hpp"

namespace chtest {

enum class MutOp {
  ArithmeticReplace, // + <-> -, * <-> /
  ConditionalNegate, // if/while condition wrapped in !
  BoundaryShift,     // < <-> <=, > <-> >=
  ReturnValueMutate, // int r -> r+1, bool r -> !r
  BooleanLiteralFlip
};

const char *mutOpName(MutOp op);

struct Mutant {
  // Index into the program's full enumeration order; applyMutant re-walks
  // the clone and mutates the site with this ordinal, so generation and
  // application share one ordering.
  int mutantId = 0;
  std::string targetClass;
  std::string targetMethod; // name/arity
  MutOp op = MutOp::ArithmeticReplace;
  Span span;
  std::string description; // e.g. "+ -> -"
};

// Deterministic source-order enumeration: classes and methods in
// declaration order, statements in order, expressions preorder, statement
// operators before the operators inside their expressions. classFilter
// keeps only mutants targeting those classes; ids stay global.
std::vector<Mutant>
generateMutants(const Program &p,
                const std::optional<std::set<std::string>> &classFilter = {});

// Clone of p with exactly this mutant applied, re-resolved.
Program applyMutant(const Program &p, const Mutant &m);

// Per-test outcome statuses for every mutant, against an all-passing
// baseline. A suite kills a mutant when some test of the suite no longer
// passes (Fail or Error) under it.
struct KillMatrix {
  std::vector<Mutant> mutants;
  std::vector<TestRef> tests;
  std::map<SubjectId, TestOutcome> baseline;
  std::map<int, std::map<SubjectId, TestStatus>> results; // mutantId -> test -> status

  bool killsMutant(int mutantId, const std::set<SubjectId> &suite) const;
  std::set<int> killedBy(const std::set<SubjectId> &suite) const;
  // Classes executed by the suite's tests on the unmutated program.
  std::set<std::string> coveredClasses(const std::set<SubjectId> &suite) const;
};

// Runs every test against every mutant. Throws Error(BaselineFailure)
// when a test does not pass on the unmutated program.
KillMatrix buildKillMatrix(const Program &p, const std::vector<Mutant> &mutants,
                           const std::vector<TestRef> &tests,
                           const RunOptions &opts = {});

struct CoverageStats {
  int introduced = 0; // mutants in classes the suite covers
  int killed = 0;
  int uncovered = 0; // mutants in classes the suite never executes
  double coverage = 0.0; // killed / introduced, 0 when nothing introduced
};

CoverageStats mutationCoverage(const KillMatrix &m,
                               const std::set<SubjectId> &suite);

struct ClassComparison {
  std::string className;
  int mutants = 0;
  int killedFull = 0;
  int killedA = 0;
  int killedB = 0;
  double coverageFull = 0.0;
  double coverageA = 0.0;
  double coverageB = 0.0;
  std::string classification; // improved | same | worsened, B vs A
};

struct ComparisonReport {
  std::vector<ClassComparison> rows; // sorted by class
  int totalMutants = 0;
  int totalKilledFull = 0;
  int totalKilledA = 0;
  int totalKilledB = 0;
  int killedDifference = 0; // totalKilledB - totalKilledA
  // Mean per-class suite size ratio |reduced classes| / |full classes|.
  double meanReductionA = 0.0;
  double meanReductionB = 0.0;

  std::string csv() const;
  std::string summary() const;
};

// Evaluates each class's mutants under the full suite and under that
// class's reduced suites (sets of test method ids). Classification is on
// killed counts, B vs A, any nonzero delta. Missing per-class entries
// mean an empty reduced suite.
ComparisonReport
compareSuites(const KillMatrix &matrix, const std::set<SubjectId> &fullSuite,
              const std::map<std::string, std::set<SubjectId>> &reducedA,
              const std::map<std::string, std::set<SubjectId>> &reducedB);

} // namespace chtest
