#include "ast.hpp"

namespace chtest {

namespace {

std::unique_ptr<Expr> cloneMaybe(const std::unique_ptr<Expr> &e) {
  return e ? e->clone() : nullptr;
}

std::vector<std::unique_ptr<Stmt>>
cloneBody(const std::vector<std::unique_ptr<Stmt>> &body) {
  std::vector<std::unique_ptr<Stmt>> out;
  out.reserve(body.size());
  for (const auto &s : body)
    out.push_back(s->clone());
  return out;
}

bool equalsMaybe(const std::unique_ptr<Expr> &a,
                 const std::unique_ptr<Expr> &b) {
  if (!a || !b)
    return !a && !b;
  return astEquals(*a, *b);
}

bool equalsBody(const std::vector<std::unique_ptr<Stmt>> &a,
                const std::vector<std::unique_ptr<Stmt>> &b) {
  if (a.size() != b.size())
    return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!astEquals(*a[i], *b[i]))
      return false;
  return true;
}

} // namespace

std::unique_ptr<Expr> Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->span = span;
  e->intValue = intValue;
  e->boolValue = boolValue;
  e->name = name;
  e->binOp = binOp;
  e->unOp = unOp;
  e->lhs = cloneMaybe(lhs);
  e->rhs = cloneMaybe(rhs);
  e->operand = cloneMaybe(operand);
  e->receiver = cloneMaybe(receiver);
  e->isSuper = isSuper;
  e->args.reserve(args.size());
  for (const auto &a : args)
    e->args.push_back(a->clone());
  return e;
}

std::unique_ptr<Stmt> Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->span = span;
  s->declType = declType;
  s->target = target;
  s->targetIsField = targetIsField;
  s->expr = cloneMaybe(expr);
  s->body = cloneBody(body);
  s->elseBody = cloneBody(elseBody);
  return s;
}

MethodDecl MethodDecl::clone() const {
  MethodDecl m;
  m.name = name;
  m.params = params;
  m.returnType = returnType;
  m.isAbstract = isAbstract;
  m.isConstructor = isConstructor;
  m.body = cloneBody(body);
  m.span = span;
  return m;
}

ClassDecl ClassDecl::clone() const {
  ClassDecl c;
  c.name = name;
  c.superclass = superclass;
  c.fields = fields;
  c.methods.reserve(methods.size());
  for (const auto &m : methods)
    c.methods.push_back(m.clone());
  c.span = span;
  return c;
}

ProgramAst ProgramAst::clone() const {
  ProgramAst p;
  p.classes.reserve(classes.size());
  for (const auto &c : classes)
    p.classes.push_back(c.clone());
  return p;
}

bool astEquals(const Expr &a, const Expr &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case ExprKind::IntLit:
    return a.intValue == b.intValue;
  case ExprKind::BoolLit:
    return a.boolValue == b.boolValue;
  case ExprKind::NullLit:
    return true;
  case ExprKind::VarRef:
  case ExprKind::ThisField:
    return a.name == b.name;
  case ExprKind::Binary:
    return a.binOp == b.binOp && astEquals(*a.lhs, *b.lhs) &&
           astEquals(*a.rhs, *b.rhs);
  case ExprKind::Unary:
    return a.unOp == b.unOp && astEquals(*a.operand, *b.operand);
  case ExprKind::New:
  case ExprKind::Call:
    break;
  }
  if (a.name != b.name || a.isSuper != b.isSuper ||
      !equalsMaybe(a.receiver, b.receiver) || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!astEquals(*a.args[i], *b.args[i]))
      return false;
  return true;
}

bool astEquals(const Stmt &a, const Stmt &b) {
  return a.kind == b.kind && a.declType == b.declType && a.target == b.target &&
         a.targetIsField == b.targetIsField && equalsMaybe(a.expr, b.expr) &&
         equalsBody(a.body, b.body) && equalsBody(a.elseBody, b.elseBody);
}

bool astEquals(const MethodDecl &a, const MethodDecl &b) {
  return a.name == b.name && a.params == b.params &&
         a.returnType == b.returnType && a.isAbstract == b.isAbstract &&
         a.isConstructor == b.isConstructor && equalsBody(a.body, b.body);
}

bool astEquals(const ClassDecl &a, const ClassDecl &b) {
  if (a.name != b.name || a.superclass != b.superclass ||
      a.fields.size() != b.fields.size() || a.methods.size() != b.methods.size())
    return false;
  for (size_t i = 0; i < a.fields.size(); ++i)
    if (a.fields[i].type != b.fields[i].type ||
        a.fields[i].name != b.fields[i].name)
      return false;
  for (size_t i = 0; i < a.methods.size(); ++i)
    if (!astEquals(a.methods[i], b.methods[i]))
      return false;
  return true;
}

} // namespace chtest
