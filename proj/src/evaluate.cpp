#include "evaluate.hpp"

#include <sstream>

#include "distiller.hpp"
#include "interp.hpp"
#include "selector.hpp"

namespace chtest {

namespace {

// Selected test-class subjects expanded to the runnable test methods.
std::set<SubjectId>
expandToMethods(const std::set<SubjectId> &testClassIds,
                const std::map<std::string, std::vector<TestRef>> &byClass) {
  std::set<SubjectId> out;
  for (const auto &classId : testClassIds) {
    auto it = byClass.find(classId);
    if (it == byClass.end())
      continue;
    for (const auto &t : it->second)
      out.insert(t.methodId());
  }
  return out;
}

} // namespace

EvaluateResult evaluateSnapshot(const Program &p,
                                const EvaluateOptions &opts) {
  ChangeModel modelA = distillInitial(p, opts.modeA, opts.tests);
  bool flipped = opts.modeB.includeConstructors ==
                     opts.modeA.includeConstructors &&
                 opts.modeB.mode != opts.modeA.mode;
  ChangeModel modelB = flipped ? polymorphicRelink(modelA)
                               : distillInitial(p, opts.modeB, opts.tests);

  std::vector<TestRef> tests = discoverTests(p, opts.tests);
  std::map<std::string, std::vector<TestRef>> testsByClassId;
  std::set<SubjectId> fullSuite;
  std::set<std::string> testClasses;
  for (const auto &t : tests) {
    testsByClassId[makeClassId(t.className)].push_back(t);
    fullSuite.insert(t.methodId());
    testClasses.insert(t.className);
  }

  std::set<std::string> mutantScope;
  for (const auto &cls : p.ast.classes)
    if (!opts.tests.isTestClass(cls.name))
      mutantScope.insert(cls.name);

  std::vector<Mutant> mutants = generateMutants(p, mutantScope);
  KillMatrix matrix = buildKillMatrix(p, mutants, tests, opts.run);

  std::map<std::string, std::set<SubjectId>> reducedA, reducedB;
  for (const auto &cls : mutantScope) {
    SubjectId classId = makeClassId(cls);
    reducedA[cls] =
        expandToMethods(selectForClass(modelA, classId, opts.tests),
                        testsByClassId);
    reducedB[cls] =
        expandToMethods(selectForClass(modelB, classId, opts.tests),
                        testsByClassId);
  }

  EvaluateResult out;
  out.report = compareSuites(matrix, fullSuite, reducedA, reducedB);
  out.fullCoverage = mutationCoverage(matrix, fullSuite);
  out.testMethods = static_cast<int>(tests.size());
  out.testClasses = static_cast<int>(testClasses.size());
  out.mutants = static_cast<int>(mutants.size());
  return out;
}

std::string EvaluateResult::summaryText() const {
  std::ostringstream os;
  os << "test classes: " << testClasses << ", test methods: " << testMethods
     << "\n";
  os << "full-suite mutation coverage: " << fullCoverage.killed << "/"
     << fullCoverage.introduced;
  if (fullCoverage.uncovered)
    os << " (+" << fullCoverage.uncovered << " uncovered)";
  os << "\n";
  os << report.summary();
  return os.str();
}

} // namespace chtest
