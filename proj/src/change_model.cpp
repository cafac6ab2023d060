#include "change_model.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chtest {

using nlohmann::json;

SubjectId makeClassId(const std::string &name) { return "class:" + name; }

SubjectId makeMethodId(const std::string &className, const std::string &name,
                       int arity) {
  return "method:" + className + "." + name + "/" + std::to_string(arity);
}

SubjectId makeInvocationId(const SubjectId &ownerMethodId,
                           const std::string &callee, int arity, int ordinal) {
  // ownerMethodId is "method:Class.name/arity"; strip the kind prefix.
  std::string owner = ownerMethodId.substr(ownerMethodId.find(':') + 1);
  return "inv:" + owner + "." + callee + "/" + std::to_string(arity) + "#" +
         std::to_string(ordinal);
}

const char *subjectKindName(SubjectKind k) {
  switch (k) {
  case SubjectKind::Class: return "Class";
  case SubjectKind::Method: return "Method";
  case SubjectKind::Invocation: return "Invocation";
  }
  return "?";
}

const char *changeKindName(ChangeKind k) {
  switch (k) {
  case ChangeKind::Add: return "Add";
  case ChangeKind::Modify: return "Modify";
  case ChangeKind::Remove: return "Remove";
  }
  return "?";
}

const Change &ChangeModel::change(int changeId) const {
  if (!hasChange(changeId))
    throw Error(ErrorCode::UnknownChange,
                "no change with id " + std::to_string(changeId));
  return changes_[static_cast<size_t>(changeId)];
}

bool ChangeModel::hasChange(int changeId) const {
  return changeId >= 0 && static_cast<size_t>(changeId) < changes_.size();
}

const Subject *ChangeModel::findSubject(const SubjectId &id) const {
  auto it = subjects_.find(id);
  return it == subjects_.end() ? nullptr : &it->second;
}

bool ChangeModel::isAlive(const SubjectId &id) const {
  return aliveAdd_.count(id) > 0;
}

int ChangeModel::aliveAddOf(const SubjectId &id) const {
  auto it = aliveAdd_.find(id);
  return it == aliveAdd_.end() ? -1 : it->second;
}

std::vector<SubjectId> ChangeModel::aliveSubjects() const {
  std::vector<SubjectId> out;
  out.reserve(aliveAdd_.size());
  for (const auto &[id, cid] : aliveAdd_)
    out.push_back(id);
  return out;
}

bool ChangeModel::isConstructor(const Subject &method) const {
  if (method.kind != SubjectKind::Method)
    return false;
  const Subject *owner = findSubject(method.ownerId);
  return owner && owner->identifier == method.identifier;
}

std::set<SubjectId> ChangeModel::staticLookup(const SubjectId &startClass,
                                              const std::string &identifier,
                                              int arity, bool skipAbstract,
                                              bool includeConstructors) const {
  SubjectId cur = startClass;
  std::set<SubjectId> seen; // hierarchy is acyclic, but stay safe on raw data
  while (!cur.empty() && seen.insert(cur).second) {
    const Subject *cls = findSubject(cur);
    if (!cls || !isAlive(cur))
      break;
    for (const auto &[id, s] : subjects_) {
      if (s.kind != SubjectKind::Method || s.ownerId != cur)
        continue;
      if (s.identifier != identifier || s.arity != arity || !isAlive(id))
        continue;
      if (skipAbstract && s.isAbstract)
        continue;
      if (!includeConstructors && isConstructor(s))
        continue;
      return {id};
    }
    cur = cls->superclassId;
  }
  return {};
}

std::set<SubjectId>
ChangeModel::candidateCallees(const Subject &invocation,
                              const ResolutionMode &mode) const {
  std::set<SubjectId> out;
  if (invocation.kind != SubjectKind::Invocation)
    return out;

  if (invocation.isSuper) {
    // One fixed callee regardless of mode: the nearest concrete
    // implementation starting at the recorded superclass.
    return staticLookup(invocation.staticReceiverClassId,
                        invocation.identifier, invocation.arity,
                        /*skipAbstract=*/true, mode.includeConstructors);
  }

  if (mode.mode == Mode::Static) {
    return staticLookup(invocation.staticReceiverClassId,
                        invocation.identifier, invocation.arity,
                        /*skipAbstract=*/false, mode.includeConstructors);
  }

  for (const auto &[id, s] : subjects_) {
    if (s.kind != SubjectKind::Method || !isAlive(id))
      continue;
    if (s.identifier != invocation.identifier || s.arity != invocation.arity)
      continue;
    if (!mode.includeConstructors && isConstructor(s))
      continue;
    out.insert(id);
  }
  return out;
}

const Change &ChangeModel::recordChange(ChangeKind kind,
                                        const Subject &subject) {
  Change c;
  c.changeId = static_cast<int>(changes_.size());
  c.kind = kind;
  c.subjectId = subject.id;

  std::vector<DepEdge> edges;

  switch (kind) {
  case ChangeKind::Add: {
    if (isAlive(subject.id))
      throw Error(ErrorCode::DuplicateAdd,
                  "subject already alive: " + subject.id);
    if (subject.kind != SubjectKind::Class) {
      int ownerAdd = aliveAddOf(subject.ownerId);
      if (ownerAdd < 0)
        throw Error(ErrorCode::UnknownOwner,
                    "owner of " + subject.id + " is not alive: " +
                        subject.ownerId);
      edges.push_back({ownerAdd, DepKind::Containment});
    }
    if (subject.kind == SubjectKind::Class && !subject.superclassId.empty()) {
      int superAdd = aliveAddOf(subject.superclassId);
      if (superAdd < 0)
        throw Error(ErrorCode::UnknownOwner,
                    "superclass of " + subject.id + " is not alive: " +
                        subject.superclassId);
      edges.push_back({superAdd, DepKind::Superclass});
    }
    if (subject.kind == SubjectKind::Invocation) {
      for (const SubjectId &callee : candidateCallees(subject, mode_)) {
        int calleeAdd = aliveAddOf(callee);
        if (calleeAdd >= 0)
          edges.push_back({calleeAdd, DepKind::Callee});
      }
    }
    break;
  }
  case ChangeKind::Modify:
  case ChangeKind::Remove: {
    int add = aliveAddOf(subject.id);
    if (add < 0)
      throw Error(ErrorCode::DeadSubject,
                  std::string(changeKindName(kind)) + " of non-alive subject: " +
                      subject.id);
    edges.push_back({add, DepKind::SubjectAdd});
    break;
  }
  }

  for (const DepEdge &e : edges)
    c.dependsOn.insert(e.target);

  changes_.push_back(c);
  subjects_[subject.id] = subject;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_[c.changeId] = edges;

  if (kind == ChangeKind::Add)
    aliveAdd_[subject.id] = c.changeId;
  else if (kind == ChangeKind::Remove)
    aliveAdd_.erase(subject.id);

  return changes_.back();
}

const std::vector<DepEdge> &ChangeModel::edgesOf(int changeId) const {
  static const std::vector<DepEdge> empty;
  auto it = edges_.find(changeId);
  return it == edges_.end() ? empty : it->second;
}

std::vector<const Change *>
ChangeModel::hierarchicalDependencies(const Change &c) const {
  std::vector<const Change *> chain;
  const Change *cur = &c;
  // Modify/Remove hop to the subject's own Add first, then containment
  // edges upward. Callee and superclass edges are never followed.
  while (true) {
    const Change *next = nullptr;
    for (const DepEdge &e : edgesOf(cur->changeId)) {
      if (cur->kind != ChangeKind::Add && e.kind == DepKind::SubjectAdd) {
        next = &changes_[static_cast<size_t>(e.target)];
        break;
      }
      if (cur->kind == ChangeKind::Add && e.kind == DepKind::Containment) {
        next = &changes_[static_cast<size_t>(e.target)];
        break;
      }
    }
    if (!next)
      break;
    chain.push_back(next);
    cur = next;
  }
  return chain;
}

std::vector<const Change *>
ChangeModel::invocationalDependees(const Change &methodAdd) const {
  const Subject *s = findSubject(methodAdd.subjectId);
  if (methodAdd.kind != ChangeKind::Add || !s ||
      s->kind != SubjectKind::Method)
    throw Error(ErrorCode::NotAMethodAddition,
                "change " + std::to_string(methodAdd.changeId) +
                    " does not add a method");
  std::vector<const Change *> out;
  if (aliveAddOf(methodAdd.subjectId) != methodAdd.changeId)
    return out;
  for (const auto &[id, cid] : aliveAdd_) {
    const Subject *inv = findSubject(id);
    if (!inv || inv->kind != SubjectKind::Invocation)
      continue;
    if (candidateCallees(*inv, mode_).count(methodAdd.subjectId))
      out.push_back(&changes_[static_cast<size_t>(cid)]);
  }
  return out;
}

std::vector<SubjectId> ChangeModel::unresolvedInvocations() const {
  std::vector<SubjectId> out;
  for (const auto &[id, cid] : aliveAdd_) {
    const Subject *s = findSubject(id);
    if (!s || s->kind != SubjectKind::Invocation)
      continue;
    if (candidateCallees(*s, mode_).empty())
      out.push_back(id);
  }
  return out;
}

void ChangeModel::classifyAndIndex(const Change &c) {
  std::vector<DepEdge> edges;
  const Subject *subj = findSubject(c.subjectId);
  for (int target : c.dependsOn) {
    const Change &t = changes_[static_cast<size_t>(target)];
    const Subject *ts = findSubject(t.subjectId);
    if (c.kind != ChangeKind::Add) {
      edges.push_back({target, DepKind::SubjectAdd});
      continue;
    }
    if (subj && ts && subj->kind == SubjectKind::Class &&
        t.subjectId == subj->superclassId) {
      edges.push_back({target, DepKind::Superclass});
      continue;
    }
    bool isContainment = subj && ts && t.subjectId == subj->ownerId;
    if (isContainment)
      edges.push_back({target, DepKind::Containment});

    if (subj && subj->kind == SubjectKind::Invocation && ts &&
        ts->kind == SubjectKind::Method) {
      // The containment edge doubles as a callee edge when the containing
      // method was itself a resolution candidate (self-recursion, or a
      // same-name call resolving back to the container). The labels are
      // informational; traversal queries derive from alive state instead.
      bool callee = !isContainment;
      if (isContainment && ts->identifier == subj->identifier &&
          ts->arity == subj->arity) {
        if (mode_.mode == Mode::Polymorphic && !subj->isSuper)
          callee = !isConstructor(*ts) || mode_.includeConstructors;
        else
          callee = candidateCallees(*subj, mode_).count(t.subjectId) > 0;
      }
      if (callee)
        edges.push_back({target, DepKind::Callee});
    } else if (!isContainment) {
      edges.push_back({target, DepKind::Callee});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_[c.changeId] = edges;
}

void ChangeModel::rebuildIndexes() {
  edges_.clear();
  aliveAdd_.clear();
  for (const Change &c : changes_) {
    if (c.kind == ChangeKind::Add)
      aliveAdd_[c.subjectId] = c.changeId;
    else if (c.kind == ChangeKind::Remove)
      aliveAdd_.erase(c.subjectId);
    classifyAndIndex(c);
  }
}

bool ChangeModel::operator==(const ChangeModel &other) const {
  return mode_.mode == other.mode_.mode &&
         mode_.includeConstructors == other.mode_.includeConstructors &&
         changes_ == other.changes_ && subjects_ == other.subjects_ &&
         edges_ == other.edges_ && aliveAdd_ == other.aliveAdd_;
}

const Change *findMethodAddition(const ChangeModel &model,
                                 const std::vector<const Change *> &chain) {
  for (const Change *c : chain) {
    if (c->kind != ChangeKind::Add)
      continue;
    const Subject *s = model.findSubject(c->subjectId);
    if (s && s->kind == SubjectKind::Method)
      return c;
  }
  return nullptr;
}

namespace {

json subjectToJson(const Subject &s) {
  json j;
  j["id"] = s.id;
  j["kind"] = subjectKindName(s.kind);
  j["identifier"] = s.identifier;
  if (s.kind != SubjectKind::Class)
    j["arity"] = s.arity;
  if (!s.ownerId.empty())
    j["ownerId"] = s.ownerId;
  if (!s.superclassId.empty())
    j["superclassId"] = s.superclassId;
  if (!s.staticReceiverClassId.empty())
    j["staticReceiverClassId"] = s.staticReceiverClassId;
  if (s.isAbstract)
    j["isAbstract"] = true;
  if (s.isTest)
    j["isTest"] = true;
  if (s.isSuper)
    j["isSuper"] = true;
  return j;
}

[[noreturn]] void malformed(const std::string &where, const std::string &what) {
  throw Error(ErrorCode::MalformedDocument, where + ": " + what);
}

std::string requireString(const json &j, const std::string &where,
                          const char *field) {
  if (!j.contains(field) || !j[field].is_string())
    malformed(where, std::string("missing or non-string field '") + field + "'");
  return j[field].get<std::string>();
}

} // namespace

std::string serialize(const ChangeModel &model) {
  json doc;
  doc["mode"] =
      model.resolutionMode().mode == Mode::Static ? "static" : "polymorphic";
  doc["includeConstructors"] = model.resolutionMode().includeConstructors;

  json subjects = json::array();
  for (const auto &[id, s] : model.subjects())
    subjects.push_back(subjectToJson(s));
  doc["subjects"] = subjects;

  json changes = json::array();
  for (const Change &c : model.changes()) {
    json j;
    j["changeId"] = c.changeId;
    j["kind"] = changeKindName(c.kind);
    j["subjectId"] = c.subjectId;
    j["dependsOn"] = c.dependsOn; // std::set -> sorted array
    changes.push_back(j);
  }
  doc["changes"] = changes;

  return doc.dump(2) + "\n";
}

ChangeModel deserialize(const std::string &document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error &e) {
    malformed("document", e.what());
  }
  if (!doc.is_object() || !doc.contains("subjects") || !doc.contains("changes"))
    malformed("document", "expected object with 'subjects' and 'changes'");

  ResolutionMode mode;
  if (doc.contains("mode")) {
    std::string m = requireString(doc, "document", "mode");
    if (m == "static")
      mode.mode = Mode::Static;
    else if (m == "polymorphic")
      mode.mode = Mode::Polymorphic;
    else
      malformed("document.mode", "expected 'static' or 'polymorphic', got '" + m + "'");
  }
  if (doc.contains("includeConstructors")) {
    if (!doc["includeConstructors"].is_boolean())
      malformed("document.includeConstructors", "expected boolean");
    mode.includeConstructors = doc["includeConstructors"].get<bool>();
  }

  ChangeModel model(mode);

  if (!doc["subjects"].is_array())
    malformed("document.subjects", "expected array");
  std::map<SubjectId, Subject> subjects;
  size_t idx = 0;
  for (const json &js : doc["subjects"]) {
    std::string where = "subjects[" + std::to_string(idx++) + "]";
    Subject s;
    s.id = requireString(js, where, "id");
    std::string kind = requireString(js, where, "kind");
    if (kind == "Class")
      s.kind = SubjectKind::Class;
    else if (kind == "Method")
      s.kind = SubjectKind::Method;
    else if (kind == "Invocation")
      s.kind = SubjectKind::Invocation;
    else
      malformed(where + ".kind", "unknown subject kind '" + kind + "'");
    s.identifier = requireString(js, where, "identifier");
    if (js.contains("arity")) {
      if (!js["arity"].is_number_integer())
        malformed(where + ".arity", "expected integer");
      s.arity = js["arity"].get<int>();
    }
    if (js.contains("ownerId"))
      s.ownerId = requireString(js, where, "ownerId");
    if (js.contains("superclassId"))
      s.superclassId = requireString(js, where, "superclassId");
    if (js.contains("staticReceiverClassId"))
      s.staticReceiverClassId = requireString(js, where, "staticReceiverClassId");
    if (js.contains("isAbstract"))
      s.isAbstract = js["isAbstract"].get<bool>();
    if (js.contains("isTest"))
      s.isTest = js["isTest"].get<bool>();
    if (js.contains("isSuper"))
      s.isSuper = js["isSuper"].get<bool>();
    if (subjects.count(s.id))
      malformed(where, "duplicate subject id '" + s.id + "'");
    subjects[s.id] = s;
  }

  if (!doc["changes"].is_array())
    malformed("document.changes", "expected array");
  std::vector<Change> changes;
  idx = 0;
  for (const json &jc : doc["changes"]) {
    std::string where = "changes[" + std::to_string(idx) + "]";
    Change c;
    if (!jc.contains("changeId") || !jc["changeId"].is_number_integer())
      malformed(where, "missing or non-integer field 'changeId'");
    c.changeId = jc["changeId"].get<int>();
    if (c.changeId != static_cast<int>(idx))
      malformed(where + ".changeId",
                "expected " + std::to_string(idx) + ", got " +
                    std::to_string(c.changeId));
    std::string kind = requireString(jc, where, "kind");
    if (kind == "Add")
      c.kind = ChangeKind::Add;
    else if (kind == "Modify")
      c.kind = ChangeKind::Modify;
    else if (kind == "Remove")
      c.kind = ChangeKind::Remove;
    else
      malformed(where + ".kind", "unknown change kind '" + kind + "'");
    c.subjectId = requireString(jc, where, "subjectId");
    if (!subjects.count(c.subjectId))
      malformed(where + ".subjectId", "unknown subject '" + c.subjectId + "'");
    if (!jc.contains("dependsOn") || !jc["dependsOn"].is_array())
      malformed(where, "missing or non-array field 'dependsOn'");
    for (const json &d : jc["dependsOn"]) {
      if (!d.is_number_integer())
        malformed(where + ".dependsOn", "expected integer changeId");
      int dep = d.get<int>();
      if (dep < 0 || dep >= c.changeId)
        malformed(where + ".dependsOn",
                  "dependency on unknown or non-earlier changeId " +
                      std::to_string(dep));
      c.dependsOn.insert(dep);
    }
    changes.push_back(c);
    ++idx;
  }

  // Replaying is not possible (edges are historical), so install the raw
  // data and rebuild indexes from it.
  model.installRaw(std::move(changes), std::move(subjects));
  return model;
}

void ChangeModel::installRaw(std::vector<Change> changes,
                             std::map<SubjectId, Subject> subjects) {
  changes_ = std::move(changes);
  subjects_ = std::move(subjects);
  rebuildIndexes();
}

} // namespace chtest
