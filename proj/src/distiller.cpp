#include "distiller.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "errors.hpp"

namespace chtest {

ChangeModel distillInitial(const Program &p, const ResolutionMode &mode,
                           const TestConfig &cfg) {
  ChangeModel model(mode);
  Entities e = extractEntities(p, mode, cfg);
  for (const Subject &s : e.classes)
    model.recordChange(ChangeKind::Add, s);
  for (const Subject &s : e.methods)
    model.recordChange(ChangeKind::Add, s);
  for (const Subject &s : e.invocations)
    model.recordChange(ChangeKind::Add, s);
  return model;
}

namespace {

std::map<SubjectId, const Subject *> indexById(const Entities &e) {
  std::map<SubjectId, const Subject *> out;
  for (const Subject &s : e.classes)
    out[s.id] = &s;
  for (const Subject &s : e.methods)
    out[s.id] = &s;
  for (const Subject &s : e.invocations)
    out[s.id] = &s;
  return out;
}

void checkBase(const ChangeModel &model,
               const std::map<SubjectId, const Subject *> &oldById) {
  std::vector<std::string> mismatches;
  std::set<SubjectId> alive;
  for (const SubjectId &id : model.aliveSubjects()) {
    alive.insert(id);
    auto it = oldById.find(id);
    if (it == oldById.end())
      mismatches.push_back("alive in model but absent from old snapshot: " +
                           id);
    else if (!(*it->second == *model.findSubject(id)))
      mismatches.push_back("metadata differs for " + id);
  }
  for (const auto &[id, s] : oldById)
    if (!alive.count(id))
      mismatches.push_back("in old snapshot but not alive in model: " + id);
  if (mismatches.empty())
    return;
  std::string msg = "model does not match the old snapshot:";
  for (size_t i = 0; i < mismatches.size() && i < 5; ++i)
    msg += "\n  " + mismatches[i];
  if (mismatches.size() > 5)
    msg += "\n  (+" + std::to_string(mismatches.size() - 5) + " more)";
  throw Error(ErrorCode::InconsistentBase, msg);
}

// Invocation subjects owned by one method, grouped by callee
// identifier/arity in ordinal order.
std::map<std::pair<std::string, int>, std::vector<const Subject *>>
groupByCallee(const std::vector<const Subject *> &invs) {
  std::map<std::pair<std::string, int>, std::vector<const Subject *>> out;
  for (const Subject *s : invs)
    out[{s->identifier, s->arity}].push_back(s);
  return out;
}

} // namespace

std::vector<Change> distillDelta(ChangeModel &model, const Program &oldP,
                                 const Program &newP, const TestConfig &cfg) {
  const ResolutionMode mode = model.resolutionMode();
  Entities oldE = extractEntities(oldP, mode, cfg);
  Entities newE = extractEntities(newP, mode, cfg);
  auto oldById = indexById(oldE);
  auto newById = indexById(newE);
  checkBase(model, oldById);

  // Invocations per owning method id, extraction order.
  auto invsByOwner = [](const Entities &e) {
    std::map<SubjectId, std::vector<const Subject *>> out;
    for (const Subject &s : e.invocations)
      out[s.ownerId].push_back(&s);
    return out;
  };
  auto oldInvs = invsByOwner(oldE);
  auto newInvs = invsByOwner(newE);

  std::set<SubjectId> oldClassIds, newClassIds;
  for (const Subject &s : oldE.classes)
    oldClassIds.insert(s.id);
  for (const Subject &s : newE.classes)
    newClassIds.insert(s.id);

  // A class is torn down when deleted or when its superclass changed
  // (remove + re-add of the class with its methods and invocations).
  std::set<SubjectId> tornDown, reAdded;
  for (const Subject &s : oldE.classes) {
    if (!newClassIds.count(s.id)) {
      tornDown.insert(s.id);
    } else if (newById.at(s.id)->superclassId != s.superclassId) {
      tornDown.insert(s.id);
      reAdded.insert(s.id);
    }
  }

  std::set<SubjectId> removeMethods, addMethods, modifyMethods;
  std::set<SubjectId> removeInvs, addInvs;

  for (const Subject &m : oldE.methods) {
    bool classGone = tornDown.count(m.ownerId) > 0;
    if (classGone || !newById.count(m.id)) {
      removeMethods.insert(m.id);
      for (const Subject *inv : oldInvs[m.id])
        removeInvs.insert(inv->id);
    }
  }
  for (const Subject &m : newE.methods) {
    bool classNew = !oldClassIds.count(m.ownerId) || reAdded.count(m.ownerId);
    if (classNew || !oldById.count(m.id)) {
      addMethods.insert(m.id);
      for (const Subject *inv : newInvs[m.id])
        addInvs.insert(inv->id);
    }
  }

  // Surviving methods: body edits become Remove/Add of the changed
  // invocation subjects plus one Modify; resolution-context drift (a
  // receiver's declared type changed elsewhere) repairs the invocation
  // subjects without a Modify.
  for (const Subject &m : oldE.methods) {
    if (removeMethods.count(m.id) || !newById.count(m.id))
      continue;
    const std::string ownerName =
        m.ownerId.substr(m.ownerId.find(':') + 1);
    const ClassDecl *oldCls = oldP.findClass(ownerName);
    const ClassDecl *newCls = newP.findClass(ownerName);
    const MethodDecl *oldDecl = nullptr, *newDecl = nullptr;
    for (const auto &d : oldCls->methods)
      if (makeMethodId(ownerName, d.name, d.arity()) == m.id)
        oldDecl = &d;
    for (const auto &d : newCls->methods)
      if (makeMethodId(ownerName, d.name, d.arity()) == m.id)
        newDecl = &d;

    if (!astEquals(*oldDecl, *newDecl) ||
        !(*newById.at(m.id) == *oldById.at(m.id)))
      modifyMethods.insert(m.id);

    auto oldGroups = groupByCallee(oldInvs[m.id]);
    auto newGroups = groupByCallee(newInvs[m.id]);
    std::set<std::pair<std::string, int>> keys;
    for (const auto &[k, v] : oldGroups)
      keys.insert(k);
    for (const auto &[k, v] : newGroups)
      keys.insert(k);
    for (const auto &k : keys) {
      const auto &o = oldGroups[k];
      const auto &n = newGroups[k];
      size_t common = std::min(o.size(), n.size());
      for (size_t i = 0; i < common; ++i) {
        if (!(*o[i] == *n[i])) {
          removeInvs.insert(o[i]->id);
          addInvs.insert(n[i]->id);
        }
      }
      for (size_t i = common; i < o.size(); ++i)
        removeInvs.insert(o[i]->id);
      for (size_t i = common; i < n.size(); ++i)
        addInvs.insert(n[i]->id);
    }
  }

  size_t tail = model.changes().size();

  // Removes, dependents first: invocations, methods, classes, each in
  // reverse extraction order of the old snapshot.
  for (auto it = oldE.invocations.rbegin(); it != oldE.invocations.rend(); ++it)
    if (removeInvs.count(it->id))
      model.recordChange(ChangeKind::Remove, *it);
  for (auto it = oldE.methods.rbegin(); it != oldE.methods.rend(); ++it)
    if (removeMethods.count(it->id))
      model.recordChange(ChangeKind::Remove, *it);
  for (auto it = oldE.classes.rbegin(); it != oldE.classes.rend(); ++it)
    if (tornDown.count(it->id))
      model.recordChange(ChangeKind::Remove, *it);

  // Modifies carry the refreshed subject metadata.
  for (const Subject &m : newE.methods)
    if (modifyMethods.count(m.id))
      model.recordChange(ChangeKind::Modify, m);

  // Adds, containers first, in new-snapshot extraction order.
  for (const Subject &c : newE.classes)
    if (!oldClassIds.count(c.id) || reAdded.count(c.id))
      model.recordChange(ChangeKind::Add, c);
  for (const Subject &m : newE.methods)
    if (addMethods.count(m.id))
      model.recordChange(ChangeKind::Add, m);
  for (const Subject &inv : newE.invocations)
    if (addInvs.count(inv.id))
      model.recordChange(ChangeKind::Add, inv);

  return std::vector<Change>(model.changes().begin() +
                                 static_cast<long>(tail),
                             model.changes().end());
}

ChangeModel polymorphicRelink(const ChangeModel &model) {
  ResolutionMode flipped = model.resolutionMode();
  flipped.mode =
      flipped.mode == Mode::Static ? Mode::Polymorphic : Mode::Static;
  ChangeModel out(flipped);
  // Replays with the latest stored metadata per subject, which is exact
  // for every history the distiller emits (a re-added subject's metadata
  // is that of its latest Add).
  for (const Change &c : model.changes())
    out.recordChange(c.kind, *model.findSubject(c.subjectId));
  return out;
}

} // namespace chtest
