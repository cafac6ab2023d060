#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "change_model.hpp"
#include "program.hpp"
#include "test_config.hpp"

namespace chtest {

enum class TestStatus { Pass, Fail, Error };

// One dynamically dispatched call: receiver's allocation class, callee
// name/arity, and the class whose body actually ran (nearest concrete
// implementation at or above the runtime class). Constructor executions
// record the allocated class as both runtimeClass and resolvedOwner.
struct TraceEntry {
  std::string runtimeClass;
  std::string identifier;
  int arity = 0;
  std::string resolvedOwner;
  bool viaSuper = false;

  bool operator==(const TraceEntry &) const = default;
};

struct TestOutcome {
  SubjectId testId;
  TestStatus status = TestStatus::Pass;
  std::string message;
  // Dispatches during the test method body only. The constructor and
  // SetUp run first to build state but are not traced; the trace is the
  // selection oracle and must mirror what invocation subjects in test
  // bodies can reach.
  std::vector<TraceEntry> trace;
  // Owners of every body executed in any phase (constructor, SetUp,
  // body): the classes this test covers.
  std::set<std::string> executedClasses;
  long long stepCount = 0;
};

struct RunOptions {
  long long stepBudget = 1000000;
};

struct TestRef {
  std::string className;
  std::string methodName; // tests are 0-ary

  SubjectId methodId() const { return makeMethodId(className, methodName, 0); }
  auto operator<=>(const TestRef &) const = default;
};

// Declared 0-ary non-constructor methods matching cfg, sorted.
std::vector<TestRef> discoverTests(const Program &p, const TestConfig &cfg);

// Fresh heap per run. Status Fail iff an assertion evaluated false;
// Error on runtime faults (division by zero, call on null, unresolved
// dispatch, step budget exceeded, missing constructor). Never throws for
// program-level failures.
TestOutcome runTest(const Program &p, const TestRef &test,
                    const RunOptions &opts = {});

// Outcomes keyed by test method SubjectId; tests are isolated.
std::map<SubjectId, TestOutcome> runSuite(const Program &p,
                                          const std::vector<TestRef> &tests,
                                          const RunOptions &opts = {});

// Tests whose body trace contains a dispatch resolving to the concrete
// body className.methodName/arity.
std::set<SubjectId>
dynamicRelevantTests(const std::map<SubjectId, TestOutcome> &outcomes,
                     const std::string &className,
                     const std::string &methodName, int arity);
std::set<SubjectId> dynamicRelevantTests(const Program &p,
                                         const std::string &className,
                                         const std::string &methodName,
                                         int arity,
                                         const std::vector<TestRef> &tests,
                                         const RunOptions &opts = {});

// Probe: instantiate className with no arguments and run its 0-ary
// method, returning the integer result; nullopt on any fault or a
// non-integer result. Used to bake expected values into generated tests.
std::optional<long long> runMethodForValue(const Program &p,
                                           const std::string &className,
                                           const std::string &methodName,
                                           const RunOptions &opts = {});

} // namespace chtest
