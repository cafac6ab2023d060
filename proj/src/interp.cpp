#include "interp.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <sstream>

#include "ast.hpp"
#include "errors.hpp"

namespace chtest {

namespace {

struct Object;

struct Value {
  enum class Tag { Null, Int, Bool, Obj };
  Tag tag = Tag::Null;
  long long i = 0;
  bool b = false;
  Object *obj = nullptr;

  static Value null() { return {}; }
  static Value ofInt(long long v) {
    Value r;
    r.tag = Tag::Int;
    r.i = v;
    return r;
  }
  static Value ofBool(bool v) {
    Value r;
    r.tag = Tag::Bool;
    r.b = v;
    return r;
  }
  static Value ofObj(Object *o) {
    Value r;
    r.tag = Tag::Obj;
    r.obj = o;
    return r;
  }
};

struct Object {
  const ClassDecl *cls = nullptr;
  std::map<std::string, Value> fields;
};

// Thrown for runtime faults; caught at the test boundary as Error.
struct Fault {
  std::string message;
};

// Thrown when an assertion evaluates false; caught as Fail.
struct AssertFailed {
  std::string message;
};

[[noreturn]] void fault(const std::string &msg) { throw Fault{msg}; }

std::string at(const Span &s) {
  if (s.line == 0)
    return "";
  std::ostringstream os;
  os << " at line " << s.line << ":" << s.col;
  return os.str();
}

const char *tagName(Value::Tag t) {
  switch (t) {
  case Value::Tag::Null:
    return "null";
  case Value::Tag::Int:
    return "int";
  case Value::Tag::Bool:
    return "bool";
  case Value::Tag::Obj:
    return "object";
  }
  return "?";
}

long long needInt(const Value &v, const Span &s) {
  if (v.tag != Value::Tag::Int)
    fault(std::string("expected int, got ") + tagName(v.tag) + at(s));
  return v.i;
}

bool needBool(const Value &v, const Span &s) {
  if (v.tag != Value::Tag::Bool)
    fault(std::string("expected bool, got ") + tagName(v.tag) + at(s));
  return v.b;
}

// Wraparound on purpose: mutated loops can blow past long long range and
// signed overflow would be undefined in the host.
long long wrapAdd(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) +
                                static_cast<unsigned long long>(b));
}
long long wrapSub(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) -
                                static_cast<unsigned long long>(b));
}
long long wrapMul(long long a, long long b) {
  return static_cast<long long>(static_cast<unsigned long long>(a) *
                                static_cast<unsigned long long>(b));
}

struct Frame {
  Object *self = nullptr;
  const ClassDecl *definingClass = nullptr; // lexical home of the running body
  const TypeRef *returnType = nullptr;      // null for constructors
  std::vector<std::map<std::string, Value>> scopes;

  Value *find(const std::string &name) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end())
        return &f->second;
    }
    return nullptr;
  }
};

enum class Flow { Normal, Returned };

class Interp {
public:
  Interp(const Program &p, const RunOptions &opts) : p_(p), opts_(opts) {}

  bool tracing = false;
  std::vector<TraceEntry> trace;
  std::set<std::string> executedClasses;
  long long steps = 0;

  Value instantiate(const std::string &className, std::vector<Value> args,
                    const Span &site) {
    const ClassDecl *cls = p_.findClass(className);
    if (!cls)
      fault("unknown class " + className + at(site));
    if (p_.hasUnimplementedAbstract(*cls))
      fault("cannot instantiate " + className +
            ": unimplemented abstract methods" + at(site));
    auto *obj = heap_.emplace_back(std::make_unique<Object>()).get();
    obj->cls = cls;
    defaultFields(obj, cls);
    const auto arity = static_cast<int>(args.size());
    const MethodDecl *ctor = findCtor(cls, arity);
    if (ctor) {
      runBody(obj, cls, ctor, cls, std::move(args), /*viaSuper=*/false, site);
    } else if (arity != 0) {
      fault("no constructor " + className + "/" + std::to_string(arity) +
            at(site));
    }
    return Value::ofObj(obj);
  }

  // Dynamic dispatch: nearest concrete body at or above the receiver's
  // runtime class.
  Value dispatch(Object *receiver, const std::string &name, int arity,
                 std::vector<Value> args, const Span &site) {
    const ClassDecl *owner = nullptr;
    const MethodDecl *m = p_.lookupConcrete(*receiver->cls, name, arity, &owner);
    if (!m)
      fault("unresolved dispatch " + receiver->cls->name + "." + name + "/" +
            std::to_string(arity) + at(site));
    return runBody(receiver, owner, m, receiver->cls, std::move(args),
                   /*viaSuper=*/false, site);
  }

  // super.m() resolves from the lexical definer's superclass, not the
  // runtime class.
  Value dispatchSuper(Object *receiver, const ClassDecl *definingClass,
                      const std::string &name, int arity,
                      std::vector<Value> args, const Span &site) {
    const ClassDecl *base =
        definingClass ? p_.superOf(*definingClass) : nullptr;
    if (!base)
      fault("super call with no superclass" + at(site));
    const ClassDecl *owner = nullptr;
    const MethodDecl *m = p_.lookupConcrete(*base, name, arity, &owner);
    if (!m)
      fault("unresolved super dispatch " + base->name + "." + name + "/" +
            std::to_string(arity) + at(site));
    return runBody(receiver, owner, m, receiver->cls, std::move(args),
                   /*viaSuper=*/true, site);
  }

private:
  const Program &p_;
  RunOptions opts_;
  std::deque<std::unique_ptr<Object>> heap_;

  void step(const Span &s) {
    if (++steps > opts_.stepBudget)
      fault("step budget exceeded" + at(s));
  }

  void defaultFields(Object *obj, const ClassDecl *cls) {
    for (const ClassDecl *c = cls; c; c = p_.superOf(*c)) {
      for (const auto &f : c->fields) {
        Value v;
        if (f.type.kind == TypeKind::Int)
          v = Value::ofInt(0);
        else if (f.type.kind == TypeKind::Bool)
          v = Value::ofBool(false);
        obj->fields.emplace(f.name, v);
      }
    }
  }

  const MethodDecl *findCtor(const ClassDecl *cls, int arity) const {
    for (const auto &m : cls->methods)
      if (m.isConstructor && m.arity() == arity)
        return &m;
    return nullptr;
  }

  Value runBody(Object *self, const ClassDecl *owner, const MethodDecl *m,
                const ClassDecl *runtimeClass, std::vector<Value> args,
                bool viaSuper, const Span &site) {
    step(site);
    executedClasses.insert(owner->name);
    if (tracing)
      trace.push_back({runtimeClass->name, m->name, m->arity(), owner->name,
                       viaSuper});
    Frame f;
    f.self = self;
    f.definingClass = owner;
    f.returnType = m->isConstructor ? nullptr : &m->returnType;
    f.scopes.emplace_back();
    for (size_t i = 0; i < m->params.size(); ++i)
      f.scopes.back()[m->params[i].name] = args[i];
    Value ret = defaultReturn(m);
    for (const auto &st : m->body)
      if (execStmt(f, *st, ret) == Flow::Returned)
        break;
    return ret;
  }

  Value defaultReturn(const MethodDecl *m) const {
    if (m->isConstructor)
      return Value::null();
    switch (m->returnType.kind) {
    case TypeKind::Int:
      return Value::ofInt(0);
    case TypeKind::Bool:
      return Value::ofBool(false);
    default:
      return Value::null();
    }
  }

  Flow execStmt(Frame &f, const Stmt &s, Value &ret) {
    step(s.span);
    switch (s.kind) {
    case StmtKind::VarDecl: {
      Value v;
      if (s.expr)
        v = evalExpr(f, *s.expr);
      else if (s.declType.kind == TypeKind::Int)
        v = Value::ofInt(0);
      else if (s.declType.kind == TypeKind::Bool)
        v = Value::ofBool(false);
      f.scopes.back()[s.target] = v;
      return Flow::Normal;
    }
    case StmtKind::Assign: {
      Value v = evalExpr(f, *s.expr);
      if (!s.targetIsField) {
        if (Value *slot = f.find(s.target)) {
          *slot = v;
          return Flow::Normal;
        }
      }
      auto it = f.self->fields.find(s.target);
      if (it == f.self->fields.end())
        fault("unknown name " + s.target + at(s.span));
      it->second = v;
      return Flow::Normal;
    }
    case StmtKind::If: {
      bool cond = needBool(evalExpr(f, *s.expr), s.expr->span);
      const auto &branch = cond ? s.body : s.elseBody;
      f.scopes.emplace_back();
      Flow flow = Flow::Normal;
      for (const auto &st : branch)
        if ((flow = execStmt(f, *st, ret)) == Flow::Returned)
          break;
      f.scopes.pop_back();
      return flow;
    }
    case StmtKind::While: {
      while (needBool(evalExpr(f, *s.expr), s.expr->span)) {
        step(s.span);
        f.scopes.emplace_back();
        Flow flow = Flow::Normal;
        for (const auto &st : s.body)
          if ((flow = execStmt(f, *st, ret)) == Flow::Returned)
            break;
        f.scopes.pop_back();
        if (flow == Flow::Returned)
          return Flow::Returned;
      }
      return Flow::Normal;
    }
    case StmtKind::Return:
      if (s.expr)
        ret = evalExpr(f, *s.expr);
      return Flow::Returned;
    case StmtKind::Assert: {
      if (!needBool(evalExpr(f, *s.expr), s.expr->span))
        throw AssertFailed{"assertion failed" + at(s.span)};
      return Flow::Normal;
    }
    case StmtKind::ExprStmt:
      evalExpr(f, *s.expr);
      return Flow::Normal;
    }
    fault("unreachable statement kind");
  }

  Value evalExpr(Frame &f, const Expr &e) {
    step(e.span);
    switch (e.kind) {
    case ExprKind::IntLit:
      return Value::ofInt(e.intValue);
    case ExprKind::BoolLit:
      return Value::ofBool(e.boolValue);
    case ExprKind::NullLit:
      return Value::null();
    case ExprKind::VarRef: {
      if (Value *slot = f.find(e.name))
        return *slot;
      auto it = f.self->fields.find(e.name);
      if (it == f.self->fields.end())
        fault("unknown name " + e.name + at(e.span));
      return it->second;
    }
    case ExprKind::ThisField: {
      auto it = f.self->fields.find(e.name);
      if (it == f.self->fields.end())
        fault("unknown field " + e.name + at(e.span));
      return it->second;
    }
    case ExprKind::Unary: {
      Value v = evalExpr(f, *e.operand);
      if (e.unOp == UnOp::Not)
        return Value::ofBool(!needBool(v, e.span));
      return Value::ofInt(wrapSub(0, needInt(v, e.span)));
    }
    case ExprKind::Binary:
      return evalBinary(f, e);
    case ExprKind::New: {
      std::vector<Value> args;
      args.reserve(e.args.size());
      for (const auto &a : e.args)
        args.push_back(evalExpr(f, *a));
      return instantiate(e.name, std::move(args), e.span);
    }
    case ExprKind::Call: {
      std::vector<Value> args;
      args.reserve(e.args.size());
      if (e.isSuper) {
        for (const auto &a : e.args)
          args.push_back(evalExpr(f, *a));
        return dispatchSuper(f.self, f.definingClass, e.name,
                             static_cast<int>(e.args.size()), std::move(args),
                             e.span);
      }
      Value recv =
          e.receiver ? evalExpr(f, *e.receiver) : Value::ofObj(f.self);
      for (const auto &a : e.args)
        args.push_back(evalExpr(f, *a));
      if (recv.tag == Value::Tag::Null)
        fault("call on null" + at(e.span));
      if (recv.tag != Value::Tag::Obj)
        fault(std::string("call on ") + tagName(recv.tag) + at(e.span));
      return dispatch(recv.obj, e.name, static_cast<int>(e.args.size()),
                      std::move(args), e.span);
    }
    }
    fault("unreachable expression kind");
  }

  Value evalBinary(Frame &f, const Expr &e) {
    // Short circuit before evaluating the right operand.
    if (e.binOp == BinOp::And) {
      if (!needBool(evalExpr(f, *e.lhs), e.lhs->span))
        return Value::ofBool(false);
      return Value::ofBool(needBool(evalExpr(f, *e.rhs), e.rhs->span));
    }
    if (e.binOp == BinOp::Or) {
      if (needBool(evalExpr(f, *e.lhs), e.lhs->span))
        return Value::ofBool(true);
      return Value::ofBool(needBool(evalExpr(f, *e.rhs), e.rhs->span));
    }
    Value a = evalExpr(f, *e.lhs);
    Value b = evalExpr(f, *e.rhs);
    switch (e.binOp) {
    case BinOp::Add:
      return Value::ofInt(wrapAdd(needInt(a, e.span), needInt(b, e.span)));
    case BinOp::Sub:
      return Value::ofInt(wrapSub(needInt(a, e.span), needInt(b, e.span)));
    case BinOp::Mul:
      return Value::ofInt(wrapMul(needInt(a, e.span), needInt(b, e.span)));
    case BinOp::Div: {
      long long x = needInt(a, e.span), y = needInt(b, e.span);
      if (y == 0)
        fault("division by zero" + at(e.span));
      if (x == std::numeric_limits<long long>::min() && y == -1)
        fault("division overflow" + at(e.span));
      return Value::ofInt(x / y);
    }
    case BinOp::Lt:
      return Value::ofBool(needInt(a, e.span) < needInt(b, e.span));
    case BinOp::Le:
      return Value::ofBool(needInt(a, e.span) <= needInt(b, e.span));
    case BinOp::Gt:
      return Value::ofBool(needInt(a, e.span) > needInt(b, e.span));
    case BinOp::Ge:
      return Value::ofBool(needInt(a, e.span) >= needInt(b, e.span));
    case BinOp::Eq:
      return Value::ofBool(valueEq(a, b, e.span));
    case BinOp::Ne:
      return Value::ofBool(!valueEq(a, b, e.span));
    default:
      fault("unreachable binary op");
    }
  }

  // Reference identity for objects; null compares equal only to null.
  bool valueEq(const Value &a, const Value &b, const Span &s) {
    if (a.tag == Value::Tag::Int && b.tag == Value::Tag::Int)
      return a.i == b.i;
    if (a.tag == Value::Tag::Bool && b.tag == Value::Tag::Bool)
      return a.b == b.b;
    bool aRef = a.tag == Value::Tag::Null || a.tag == Value::Tag::Obj;
    bool bRef = b.tag == Value::Tag::Null || b.tag == Value::Tag::Obj;
    if (aRef && bRef) {
      Object *ao = a.tag == Value::Tag::Obj ? a.obj : nullptr;
      Object *bo = b.tag == Value::Tag::Obj ? b.obj : nullptr;
      return ao == bo;
    }
    fault(std::string("cannot compare ") + tagName(a.tag) + " with " +
          tagName(b.tag) + at(s));
  }
};

Span harnessSpan() { return {0, 0}; }

} // namespace

std::vector<TestRef> discoverTests(const Program &p, const TestConfig &cfg) {
  std::vector<TestRef> out;
  for (const auto &cls : p.ast.classes) {
    if (!cfg.isTestClass(cls.name))
      continue;
    for (const auto &m : cls.methods) {
      if (m.isConstructor || m.arity() != 0 ||
          !cfg.isTestMethod(cls.name, m.name))
        continue;
      out.push_back({cls.name, m.name});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TestOutcome runTest(const Program &p, const TestRef &test,
                    const RunOptions &opts) {
  TestOutcome out;
  out.testId = test.methodId();
  Interp in(p, opts);
  try {
    const ClassDecl *cls = p.findClass(test.className);
    if (!cls)
      throw Fault{"unknown test class " + test.className};
    Value self = in.instantiate(test.className, {}, harnessSpan());
    const MethodDecl *setUp = p.lookupConcrete(*cls, "SetUp", 0);
    if (!setUp)
      setUp = p.lookupConcrete(*cls, "setUp", 0);
    if (setUp)
      in.dispatch(self.obj, setUp->name, 0, {}, harnessSpan());
    if (!p.lookupConcrete(*cls, test.methodName, 0))
      throw Fault{"unknown test method " + test.className + "." +
                  test.methodName};
    in.tracing = true;
    in.dispatch(self.obj, test.methodName, 0, {}, harnessSpan());
    out.status = TestStatus::Pass;
  } catch (const AssertFailed &a) {
    out.status = TestStatus::Fail;
    out.message = a.message;
  } catch (const Fault &fa) {
    out.status = TestStatus::Error;
    out.message = fa.message;
  }
  out.trace = std::move(in.trace);
  // The harness's own invocation of the test method is not a trace
  // entry; the trace holds dispatches made by the body.
  if (!out.trace.empty() && out.trace.front().identifier == test.methodName &&
      out.trace.front().arity == 0 &&
      out.trace.front().runtimeClass == test.className)
    out.trace.erase(out.trace.begin());
  out.executedClasses = std::move(in.executedClasses);
  out.stepCount = in.steps;
  return out;
}

std::map<SubjectId, TestOutcome> runSuite(const Program &p,
                                          const std::vector<TestRef> &tests,
                                          const RunOptions &opts) {
  std::map<SubjectId, TestOutcome> out;
  for (const auto &t : tests)
    out[t.methodId()] = runTest(p, t, opts);
  return out;
}

std::set<SubjectId>
dynamicRelevantTests(const std::map<SubjectId, TestOutcome> &outcomes,
                     const std::string &className,
                     const std::string &methodName, int arity) {
  std::set<SubjectId> out;
  for (const auto &[id, o] : outcomes)
    for (const auto &e : o.trace)
      if (e.resolvedOwner == className && e.identifier == methodName &&
          e.arity == arity) {
        out.insert(id);
        break;
      }
  return out;
}

std::set<SubjectId> dynamicRelevantTests(const Program &p,
                                         const std::string &className,
                                         const std::string &methodName,
                                         int arity,
                                         const std::vector<TestRef> &tests,
                                         const RunOptions &opts) {
  return dynamicRelevantTests(runSuite(p, tests, opts), className, methodName,
                              arity);
}

std::optional<long long> runMethodForValue(const Program &p,
                                           const std::string &className,
                                           const std::string &methodName,
                                           const RunOptions &opts) {
  Interp in(p, opts);
  try {
    Value self = in.instantiate(className, {}, harnessSpan());
    Value v = in.dispatch(self.obj, methodName, 0, {}, harnessSpan());
    if (v.tag != Value::Tag::Int)
      return std::nullopt;
    return v.i;
  } catch (const AssertFailed &) {
    return std::nullopt;
  } catch (const Fault &) {
    return std::nullopt;
  }
}

} // namespace chtest
