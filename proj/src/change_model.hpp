#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace chtest {

// A Subject is a source-code entity: a class, a method, or a method
// invocation. Subjects are identified by stable string ids:
//
//   class:Foo
//   method:Foo.foo/0
//   inv:FooBarTest.fooTest/0.foo/0#0
//
// For invocations the owner segment is the containing method's qualified
// name, the name/arity are the callee's, and #n counts occurrences of that
// same callee/arity within the method body.
using SubjectId = std::string;

enum class SubjectKind { Class, Method, Invocation };

struct Subject {
  SubjectId id;
  SubjectKind kind = SubjectKind::Class;
  std::string identifier;           // simple name; callee name for invocations
  int arity = -1;                   // methods and invocations only
  SubjectId ownerId;                // methods -> class, invocations -> method
  SubjectId superclassId;           // classes only, empty if none
  SubjectId staticReceiverClassId;  // invocations only, empty if unresolved
  bool isAbstract = false;          // methods
  bool isTest = false;              // methods
  bool isSuper = false;             // invocations via super.m(); fixed callee

  bool operator==(const Subject &) const = default;
};

SubjectId makeClassId(const std::string &name);
SubjectId makeMethodId(const std::string &className, const std::string &name,
                       int arity);
SubjectId makeInvocationId(const SubjectId &ownerMethodId,
                           const std::string &callee, int arity, int ordinal);

enum class ChangeKind { Add, Modify, Remove };

struct Change {
  int changeId = 0;
  ChangeKind kind = ChangeKind::Add;
  SubjectId subjectId;
  std::set<int> dependsOn;

  bool operator==(const Change &) const = default;
};

enum class Mode { Static, Polymorphic };

struct ResolutionMode {
  Mode mode = Mode::Static;
  bool includeConstructors = false;
};

// Role of a single dependency edge. Derivable from the change list and the
// subject table; kept alongside each change so chain walks do not have to
// re-classify. rebuildIndexes() recomputes everything from scratch and the
// test suite checks it matches the incrementally maintained state.
enum class DepKind { SubjectAdd, Containment, Superclass, Callee };

struct DepEdge {
  int target = 0;
  DepKind kind = DepKind::Containment;

  bool operator==(const DepEdge &) const = default;
  auto operator<=>(const DepEdge &) const = default;
};

struct ModelDiagnostic {
  std::string kind; // "unresolved-invocation", "dead-subject", "cycle", ...
  std::string message;
};

// Append-only store of changes plus the indexes Algorithm-style selection
// walks. Single writer while building; immutable and freely shareable
// afterwards (all queries are const).
class ChangeModel {
public:
  explicit ChangeModel(ResolutionMode mode = {}) : mode_(mode) {}

  const ResolutionMode &resolutionMode() const { return mode_; }
  const std::vector<Change> &changes() const { return changes_; }
  const std::map<SubjectId, Subject> &subjects() const { return subjects_; }

  const Change &change(int changeId) const;
  bool hasChange(int changeId) const;
  const Subject *findSubject(const SubjectId &id) const;

  // Liveness: a subject is alive iff its latest Add/Remove event is an Add.
  bool isAlive(const SubjectId &id) const;
  // ChangeId of the Add that made the subject alive; -1 if not alive.
  int aliveAddOf(const SubjectId &id) const;
  std::vector<SubjectId> aliveSubjects() const;

  // Appends a change, computing dependency edges per the model rules.
  // Invocation Adds resolve callee edges via candidateCallees under the
  // model's resolution mode. Throws UnknownOwner / DeadSubject /
  // DuplicateAdd.
  const Change &recordChange(ChangeKind kind, const Subject &subject);

  // Methods the invocation may bind to, in the given mode. Static: single
  // lookup from the static receiver class up the superclass chain (abstract
  // targets included). Polymorphic: every alive method matching identifier
  // and arity anywhere in the model. Super invocations resolve to the one
  // nearest concrete superclass implementation in both modes. Constructors
  // are excluded unless the mode says otherwise. Unresolvable -> empty set.
  std::set<SubjectId> candidateCallees(const Subject &invocation,
                                       const ResolutionMode &mode) const;

  // Structural containment chain upward from c, excluding callee and
  // superclass edges: Modify/Remove -> its Add, invocation -> method ->
  // class. Does not include c itself.
  std::vector<const Change *> hierarchicalDependencies(const Change &c) const;

  // All alive invocation Adds whose candidate callees include methodAdd's
  // subject. Computed from the current alive state, not the edges recorded
  // when each invocation arrived: the model keeps invocation links current
  // as methods come and go, so later additions attract existing
  // invocations and removed methods stop being reachable. Empty when
  // methodAdd is not the subject's alive Add. Throws NotAMethodAddition.
  std::vector<const Change *> invocationalDependees(const Change &methodAdd) const;

  const std::vector<DepEdge> &edgesOf(int changeId) const;

  // True when the method's identifier equals its owning class's identifier.
  bool isConstructor(const Subject &method) const;

  // Alive invocation subjects with no candidate callee under the model's
  // mode (diagnostic feed for selection reports).
  std::vector<SubjectId> unresolvedInvocations() const;

  // Recomputes all indexes and edge classifications from the change list
  // and subject table alone.
  void rebuildIndexes();

  // Used by deserialize: adopt raw change/subject data and rebuild.
  void installRaw(std::vector<Change> changes,
                  std::map<SubjectId, Subject> subjects);

  bool operator==(const ChangeModel &other) const;

private:
  void classifyAndIndex(const Change &c);
  std::set<SubjectId> staticLookup(const SubjectId &startClass,
                                   const std::string &identifier, int arity,
                                   bool skipAbstract,
                                   bool includeConstructors) const;

  ResolutionMode mode_;
  std::vector<Change> changes_;
  std::map<SubjectId, Subject> subjects_;
  std::map<int, std::vector<DepEdge>> edges_;
  std::map<SubjectId, int> aliveAdd_; // subject -> alive Add changeId
};

// First change in the chain that Adds a Method subject, or null. The caller
// prepends the starting change itself when walking per Algorithm rules.
const Change *findMethodAddition(const ChangeModel &model,
                                 const std::vector<const Change *> &chain);

// Change-model document (JSON, sorted keys, trailing newline).
std::string serialize(const ChangeModel &model);
// Throws MalformedDocument with field diagnostics.
ChangeModel deserialize(const std::string &document);

const char *subjectKindName(SubjectKind k);
const char *changeKindName(ChangeKind k);

} // namespace chtest
