#pragma once

#include <map>
#include <set>

#include "change_model.hpp"
#include "test_config.hpp"

namespace chtest {

struct SelectionResult {
  // Queried changeId -> alive test-method subject ids relevant to it.
  std::map<int, std::set<SubjectId>> perChange;
  // Unresolved invocations in traversed methods, suppressed revisits.
  std::vector<std::string> diagnostics;

  std::set<SubjectId> allTests() const;
};

// Walks from each queried change: locate the method addition through the
// structural chain, then follow invocational dependees transitively,
// collecting test methods and recursing into non-test callers not yet
// analyzed (the visited set is per queried change). Class-level changes
// aggregate over every alive method of the class. Degenerate inputs give
// empty sets plus diagnostics, never errors.
SelectionResult selectRelevantTests(const ChangeModel &model,
                                    const std::vector<int> &changeIds,
                                    const TestConfig &cfg = {});

// Union of selections over every alive method of the class, lifted to the
// owning test classes: the per-class reduced suite. Throws UnknownClass.
std::set<SubjectId> selectForClass(const ChangeModel &model,
                                   const SubjectId &classId,
                                   const TestConfig &cfg = {});

// |reduced| / |fullSuite| over test classes. Throws EmptyFullSuite.
double reductionRatio(const std::set<SubjectId> &fullSuite,
                      const std::set<SubjectId> &reduced);

} // namespace chtest
