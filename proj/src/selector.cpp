#include "selector.hpp"

#include <vector>

namespace chtest {

namespace {

// The test predicate is evaluated against subject metadata at query time
// so a caller-supplied pattern works on models distilled with another
// configuration. Constructors are never tests.
bool isTestMethodSubject(const ChangeModel &model, const Subject &method,
                         const TestConfig &cfg) {
  if (method.kind != SubjectKind::Method)
    return false;
  const Subject *owner = model.findSubject(method.ownerId);
  if (!owner || owner->identifier == method.identifier)
    return false;
  return cfg.isTestMethod(owner->identifier, method.identifier);
}

// Transitive walk from one method addition. visited holds method subject
// ids already analyzed for this queried change.
void walkFromMethodAdd(const ChangeModel &model, const Change &methodAdd,
                       const TestConfig &cfg, std::set<SubjectId> &visited,
                       std::set<SubjectId> &tests,
                       std::set<std::string> &notes) {
  std::vector<const Change *> stack{&methodAdd};
  visited.insert(methodAdd.subjectId);
  while (!stack.empty()) {
    const Change *m = stack.back();
    stack.pop_back();
    for (const Change *inv : model.invocationalDependees(*m)) {
      const Subject *invSubject = model.findSubject(inv->subjectId);
      const SubjectId &callerId = invSubject->ownerId;
      const Subject *caller = model.findSubject(callerId);
      int callerAdd = model.aliveAddOf(callerId);
      if (!caller || callerAdd < 0) {
        notes.insert("invocation " + inv->subjectId +
                     " belongs to a method that is not alive");
        continue;
      }
      if (isTestMethodSubject(model, *caller, cfg)) {
        tests.insert(callerId);
        continue;
      }
      if (!visited.insert(callerId).second) {
        notes.insert("revisit of " + callerId + " suppressed");
        continue;
      }
      stack.push_back(&model.change(callerAdd));
    }
  }
}

void noteUnresolved(const ChangeModel &model,
                    const std::set<SubjectId> &visitedMethods,
                    std::set<std::string> &notes) {
  for (const SubjectId &inv : model.unresolvedInvocations()) {
    const Subject *s = model.findSubject(inv);
    if (s && visitedMethods.count(s->ownerId))
      notes.insert("unresolved invocation " + inv);
  }
}

std::set<SubjectId> selectForOneChange(const ChangeModel &model,
                                       const Change &c, const TestConfig &cfg,
                                       std::set<std::string> &notes) {
  std::set<SubjectId> tests;
  std::set<SubjectId> visited;

  std::vector<const Change *> chain{&c};
  for (const Change *link : model.hierarchicalDependencies(c))
    chain.push_back(link);
  const Change *methodAdd = findMethodAddition(model, chain);

  if (methodAdd) {
    walkFromMethodAdd(model, *methodAdd, cfg, visited, tests, notes);
    noteUnresolved(model, visited, notes);
    return tests;
  }

  const Subject *subject = model.findSubject(c.subjectId);
  if (!subject || subject->kind != SubjectKind::Class) {
    notes.insert("change " + std::to_string(c.changeId) +
                 " has no enclosing method addition");
    return tests;
  }
  // Class-level change: aggregate over all alive methods of the class.
  for (const SubjectId &id : model.aliveSubjects()) {
    const Subject *m = model.findSubject(id);
    if (!m || m->kind != SubjectKind::Method || m->ownerId != subject->id)
      continue;
    walkFromMethodAdd(model, model.change(model.aliveAddOf(id)), cfg, visited,
                      tests, notes);
  }
  noteUnresolved(model, visited, notes);
  return tests;
}

} // namespace

std::set<SubjectId> SelectionResult::allTests() const {
  std::set<SubjectId> out;
  for (const auto &[cid, tests] : perChange)
    out.insert(tests.begin(), tests.end());
  return out;
}

SelectionResult selectRelevantTests(const ChangeModel &model,
                                    const std::vector<int> &changeIds,
                                    const TestConfig &cfg) {
  SelectionResult result;
  std::set<std::string> notes;
  for (int cid : changeIds) {
    if (!model.hasChange(cid)) {
      result.perChange[cid] = {};
      notes.insert("no change with id " + std::to_string(cid));
      continue;
    }
    result.perChange[cid] =
        selectForOneChange(model, model.change(cid), cfg, notes);
  }
  result.diagnostics.assign(notes.begin(), notes.end());
  return result;
}

std::set<SubjectId> selectForClass(const ChangeModel &model,
                                   const SubjectId &classId,
                                   const TestConfig &cfg) {
  const Subject *cls = model.findSubject(classId);
  if (!cls || cls->kind != SubjectKind::Class || !model.isAlive(classId))
    throw Error(ErrorCode::UnknownClass, "not an alive class: " + classId);

  std::set<SubjectId> testClasses;
  std::set<std::string> notes;
  for (const SubjectId &id : model.aliveSubjects()) {
    const Subject *m = model.findSubject(id);
    if (!m || m->kind != SubjectKind::Method || m->ownerId != classId)
      continue;
    std::set<SubjectId> visited, tests;
    walkFromMethodAdd(model, model.change(model.aliveAddOf(id)), cfg, visited,
                      tests, notes);
    for (const SubjectId &t : tests) {
      const Subject *test = model.findSubject(t);
      if (test)
        testClasses.insert(test->ownerId);
    }
  }
  return testClasses;
}

double reductionRatio(const std::set<SubjectId> &fullSuite,
                      const std::set<SubjectId> &reduced) {
  if (fullSuite.empty())
    throw Error(ErrorCode::EmptyFullSuite, "full test suite is empty");
  return static_cast<double>(reduced.size()) /
         static_cast<double>(fullSuite.size());
}

} // namespace chtest
