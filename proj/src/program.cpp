#include "program.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "parser.hpp"

namespace chtest {

namespace {

std::string at(const Span &span) {
  return std::to_string(span.line) + ":" + std::to_string(span.col);
}

// Lexical block scoping for receiver typing; mirrors the interpreter's
// scope stack.
class TypeScope {
public:
  void push() { blocks_.emplace_back(); }
  void pop() { blocks_.pop_back(); }
  void declare(const std::string &name, const TypeRef &type) {
    blocks_.back()[name] = type;
  }
  const TypeRef *find(const std::string &name) const {
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
      auto hit = it->find(name);
      if (hit != it->end())
        return &hit->second;
    }
    return nullptr;
  }

private:
  std::vector<std::map<std::string, TypeRef>> blocks_;
};

struct WalkCtx {
  const Program &prog;
  const ClassDecl &cls;
  const MethodDecl &method;
  TypeScope scope;
  // Called for every Call/New expression in node-first preorder.
  // receiverClass is the resolved static receiver class name, "" if
  // unknown or non-class.
  std::function<void(const Expr &, const std::string &receiverClass)> sink;
  std::vector<std::string> *warnings = nullptr;
  std::vector<std::string> *errors = nullptr;

  void warn(const Span &span, const std::string &msg) {
    if (warnings)
      warnings->push_back("warning: " + cls.name + "." + method.name + " at " +
                          at(span) + ": " + msg);
  }
  void error(const Span &span, const std::string &msg) {
    if (errors)
      errors->push_back(cls.name + "." + method.name + " at " + at(span) +
                        ": " + msg);
  }
};

std::optional<TypeRef> exprType(WalkCtx &ctx, const Expr &e) {
  switch (e.kind) {
  case ExprKind::IntLit:
    return TypeRef{TypeKind::Int, ""};
  case ExprKind::BoolLit:
    return TypeRef{TypeKind::Bool, ""};
  case ExprKind::NullLit:
    return std::nullopt;
  case ExprKind::VarRef: {
    if (const TypeRef *t = ctx.scope.find(e.name))
      return *t;
    if (const TypeRef *t = ctx.prog.fieldType(ctx.cls, e.name))
      return *t;
    return std::nullopt;
  }
  case ExprKind::ThisField: {
    if (const TypeRef *t = ctx.prog.fieldType(ctx.cls, e.name))
      return *t;
    return std::nullopt;
  }
  case ExprKind::Binary:
    switch (e.binOp) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
      return TypeRef{TypeKind::Int, ""};
    default:
      return TypeRef{TypeKind::Bool, ""};
    }
  case ExprKind::Unary:
    return e.unOp == UnOp::Not ? TypeRef{TypeKind::Bool, ""}
                               : TypeRef{TypeKind::Int, ""};
  case ExprKind::New:
    return TypeRef{TypeKind::Class, e.name};
  case ExprKind::Call: {
    const ClassDecl *recv = nullptr;
    if (e.isSuper) {
      recv = ctx.prog.superOf(ctx.cls);
    } else if (!e.receiver) {
      recv = &ctx.cls;
    } else {
      auto rt = exprType(ctx, *e.receiver);
      if (rt && rt->kind == TypeKind::Class)
        recv = ctx.prog.findClass(rt->className);
    }
    if (!recv)
      return std::nullopt;
    const MethodDecl *m =
        ctx.prog.lookup(*recv, e.name, static_cast<int>(e.args.size()));
    if (!m)
      return std::nullopt;
    return m->returnType;
  }
  }
  return std::nullopt;
}

void walkExpr(WalkCtx &ctx, const Expr &e);

void walkCall(WalkCtx &ctx, const Expr &e) {
  std::string receiverClass;
  int arity = static_cast<int>(e.args.size());
  if (e.isSuper) {
    const ClassDecl *sup = ctx.prog.superOf(ctx.cls);
    if (!sup) {
      ctx.warn(e.span, "super call in class without a superclass");
    } else {
      receiverClass = sup->name;
      if (!ctx.prog.lookupConcrete(*sup, e.name, arity))
        ctx.warn(e.span, "super." + e.name + "/" + std::to_string(arity) +
                             " has no concrete implementation");
    }
  } else if (!e.receiver) {
    receiverClass = ctx.cls.name;
    if (!ctx.prog.lookup(ctx.cls, e.name, arity))
      ctx.warn(e.span, "call to " + e.name + "/" + std::to_string(arity) +
                           " not declared on " + ctx.cls.name +
                           " or its superclasses");
  } else {
    auto rt = exprType(ctx, *e.receiver);
    if (!rt) {
      ctx.warn(e.span, "cannot determine receiver type for call to " + e.name);
    } else if (rt->kind != TypeKind::Class) {
      ctx.warn(e.span, "call to " + e.name + " on non-class receiver");
    } else {
      receiverClass = rt->className;
      const ClassDecl *rc = ctx.prog.findClass(rt->className);
      if (!rc)
        ctx.warn(e.span, "receiver type " + rt->className + " is unknown");
      else if (!ctx.prog.lookup(*rc, e.name, arity))
        ctx.warn(e.span, "call to " + e.name + "/" + std::to_string(arity) +
                             " not declared on " + rt->className +
                             " or its superclasses");
    }
  }
  if (ctx.sink)
    ctx.sink(e, receiverClass);
  if (e.receiver)
    walkExpr(ctx, *e.receiver);
  for (const auto &a : e.args)
    walkExpr(ctx, *a);
}

void walkNew(WalkCtx &ctx, const Expr &e) {
  int arity = static_cast<int>(e.args.size());
  const ClassDecl *cls = ctx.prog.findClass(e.name);
  if (!cls) {
    ctx.warn(e.span, "new of unknown class " + e.name);
  } else {
    if (ctx.prog.hasUnimplementedAbstract(*cls))
      ctx.warn(e.span, "new " + e.name + " has unimplemented abstract methods");
    bool anyCtor = false, matching = false;
    for (const auto &m : cls->methods) {
      if (!m.isConstructor)
        continue;
      anyCtor = true;
      if (m.arity() == arity)
        matching = true;
    }
    if (!matching && (anyCtor || arity > 0))
      ctx.warn(e.span, "no matching constructor " + e.name + "/" +
                           std::to_string(arity));
  }
  if (ctx.sink)
    ctx.sink(e, e.name);
  for (const auto &a : e.args)
    walkExpr(ctx, *a);
}

void walkExpr(WalkCtx &ctx, const Expr &e) {
  switch (e.kind) {
  case ExprKind::Binary:
    walkExpr(ctx, *e.lhs);
    walkExpr(ctx, *e.rhs);
    return;
  case ExprKind::Unary:
    walkExpr(ctx, *e.operand);
    return;
  case ExprKind::New:
    walkNew(ctx, e);
    return;
  case ExprKind::Call:
    walkCall(ctx, e);
    return;
  case ExprKind::ThisField:
    if (!ctx.prog.fieldType(ctx.cls, e.name))
      ctx.warn(e.span, "unknown field " + e.name);
    return;
  case ExprKind::VarRef:
    if (!ctx.scope.find(e.name) && !ctx.prog.fieldType(ctx.cls, e.name))
      ctx.warn(e.span, "unknown name " + e.name);
    return;
  default:
    return;
  }
}

void walkStmts(WalkCtx &ctx, const std::vector<std::unique_ptr<Stmt>> &body);

void walkStmt(WalkCtx &ctx, const Stmt &s) {
  switch (s.kind) {
  case StmtKind::VarDecl:
    if (s.declType.kind == TypeKind::Class &&
        !ctx.prog.findClass(s.declType.className))
      ctx.error(s.span, "unknown type " + s.declType.className);
    if (s.expr)
      walkExpr(ctx, *s.expr);
    ctx.scope.declare(s.target, s.declType);
    return;
  case StmtKind::Assign:
    if (!s.targetIsField && !ctx.scope.find(s.target) &&
        !ctx.prog.fieldType(ctx.cls, s.target))
      ctx.warn(s.span, "assignment to unknown name " + s.target);
    if (s.targetIsField && !ctx.prog.fieldType(ctx.cls, s.target))
      ctx.warn(s.span, "assignment to unknown field " + s.target);
    walkExpr(ctx, *s.expr);
    return;
  case StmtKind::If:
    walkExpr(ctx, *s.expr);
    ctx.scope.push();
    walkStmts(ctx, s.body);
    ctx.scope.pop();
    ctx.scope.push();
    walkStmts(ctx, s.elseBody);
    ctx.scope.pop();
    return;
  case StmtKind::While:
    walkExpr(ctx, *s.expr);
    ctx.scope.push();
    walkStmts(ctx, s.body);
    ctx.scope.pop();
    return;
  case StmtKind::Return:
  case StmtKind::Assert:
  case StmtKind::ExprStmt:
    if (s.expr)
      walkExpr(ctx, *s.expr);
    return;
  }
}

void walkStmts(WalkCtx &ctx, const std::vector<std::unique_ptr<Stmt>> &body) {
  for (const auto &s : body)
    walkStmt(ctx, *s);
}

void walkMethod(const Program &prog, const ClassDecl &cls,
                const MethodDecl &method,
                std::function<void(const Expr &, const std::string &)> sink,
                std::vector<std::string> *warnings,
                std::vector<std::string> *errors) {
  WalkCtx ctx{prog, cls, method, {}, std::move(sink), warnings, errors};
  ctx.scope.push();
  for (const auto &p : method.params)
    ctx.scope.declare(p.name, p.type);
  walkStmts(ctx, method.body);
  ctx.scope.pop();
}

} // namespace

Program Program::fromAst(ProgramAst ast) {
  Program p;
  p.ast = std::move(ast);
  p.resolve();
  return p;
}

const ClassDecl *Program::findClass(const std::string &name) const {
  auto it = byName_.find(name);
  return it == byName_.end() ? nullptr : it->second;
}

const ClassDecl *Program::superOf(const ClassDecl &cls) const {
  return cls.superclass.empty() ? nullptr : findClass(cls.superclass);
}

int Program::depth(const ClassDecl &cls) const {
  auto it = depth_.find(&cls);
  return it == depth_.end() ? 0 : it->second;
}

std::vector<const ClassDecl *> Program::classesInTopoOrder() const {
  std::vector<const ClassDecl *> out;
  out.reserve(ast.classes.size());
  for (const auto &c : ast.classes)
    out.push_back(&c);
  std::sort(out.begin(), out.end(),
            [this](const ClassDecl *a, const ClassDecl *b) {
              int da = depth(*a), db = depth(*b);
              if (da != db)
                return da < db;
              return a->name < b->name;
            });
  return out;
}

const MethodDecl *Program::lookup(const ClassDecl &cls, const std::string &name,
                                  int arity, const ClassDecl **ownerOut) const {
  for (const ClassDecl *c = &cls; c; c = superOf(*c)) {
    for (const auto &m : c->methods) {
      if (m.name == name && m.arity() == arity) {
        if (ownerOut)
          *ownerOut = c;
        return &m;
      }
    }
  }
  return nullptr;
}

const MethodDecl *Program::lookupConcrete(const ClassDecl &cls,
                                          const std::string &name, int arity,
                                          const ClassDecl **ownerOut) const {
  for (const ClassDecl *c = &cls; c; c = superOf(*c)) {
    for (const auto &m : c->methods) {
      if (m.name == name && m.arity() == arity && !m.isAbstract) {
        if (ownerOut)
          *ownerOut = c;
        return &m;
      }
    }
  }
  return nullptr;
}

const TypeRef *Program::fieldType(const ClassDecl &cls,
                                  const std::string &name) const {
  for (const ClassDecl *c = &cls; c; c = superOf(*c))
    for (const auto &f : c->fields)
      if (f.name == name)
        return &f.type;
  return nullptr;
}

bool Program::hasUnimplementedAbstract(const ClassDecl &cls) const {
  for (const ClassDecl *c = &cls; c; c = superOf(*c))
    for (const auto &m : c->methods)
      if (m.isAbstract && !lookupConcrete(cls, m.name, m.arity()))
        return true;
  return false;
}

void Program::resolve() {
  std::vector<std::string> errors;

  byName_.clear();
  for (const auto &c : ast.classes) {
    if (!byName_.emplace(c.name, &c).second)
      errors.push_back("duplicate class " + c.name);
  }

  for (const auto &c : ast.classes) {
    if (!c.superclass.empty() && !findClass(c.superclass))
      errors.push_back("class " + c.name + ": unknown superclass " +
                       c.superclass);
  }

  // Cycle check over resolvable superclass links.
  depth_.clear();
  for (const auto &c : ast.classes) {
    std::set<const ClassDecl *> seen;
    const ClassDecl *walk = &c;
    bool cyclic = false;
    while (walk) {
      if (!seen.insert(walk).second) {
        cyclic = true;
        break;
      }
      walk = superOf(*walk);
    }
    if (cyclic) {
      errors.push_back("inheritance cycle through class " + c.name);
    } else {
      int d = 0;
      for (const ClassDecl *w = superOf(c); w; w = superOf(*w))
        ++d;
      depth_[&c] = d;
    }
  }
  if (!errors.empty())
    throw Error(ErrorCode::ParseFailed,
                "semantic errors:\n  " + [&] {
                  std::string joined;
                  for (size_t i = 0; i < errors.size(); ++i)
                    joined += (i ? "\n  " : "") + errors[i];
                  return joined;
                }());

  for (const auto &c : ast.classes) {
    std::set<std::pair<std::string, int>> sigs;
    for (const auto &m : c.methods) {
      if (!sigs.emplace(m.name, m.arity()).second)
        errors.push_back("class " + c.name + ": duplicate method " + m.name +
                         "/" + std::to_string(m.arity()));
      if (m.isConstructor && m.name != c.name)
        errors.push_back("class " + c.name + ": constructor " + m.name +
                         " must be named after its class");
      if (!m.isConstructor && m.name == c.name)
        errors.push_back("class " + c.name + ": method named like its class" +
                         " must be a constructor (drop the return type)");
      std::set<std::string> params;
      for (const auto &p : m.params) {
        if (!params.insert(p.name).second)
          errors.push_back("class " + c.name + "." + m.name +
                           ": duplicate parameter " + p.name);
        if (p.type.kind == TypeKind::Class && !findClass(p.type.className))
          errors.push_back("class " + c.name + "." + m.name +
                           ": unknown type " + p.type.className);
      }
      if (m.returnType.kind == TypeKind::Class &&
          !findClass(m.returnType.className))
        errors.push_back("class " + c.name + "." + m.name +
                         ": unknown return type " + m.returnType.className);
    }
    std::set<std::string> fieldNames;
    for (const auto &f : c.fields) {
      if (!fieldNames.insert(f.name).second)
        errors.push_back("class " + c.name + ": duplicate field " + f.name);
      if (f.type.kind == TypeKind::Class && !findClass(f.type.className))
        errors.push_back("class " + c.name + ": field " + f.name +
                         " has unknown type " + f.type.className);
    }
    for (const ClassDecl *sup = superOf(c); sup; sup = superOf(*sup))
      for (const auto &f : sup->fields)
        if (fieldNames.count(f.name))
          errors.push_back("class " + c.name + ": field " + f.name +
                           " shadows inherited field");
  }

  warnings.clear();
  for (const auto &c : ast.classes)
    for (const auto &m : c.methods)
      walkMethod(*this, c, m, nullptr, &warnings, &errors);

  if (!errors.empty()) {
    std::string joined;
    for (size_t i = 0; i < errors.size(); ++i)
      joined += (i ? "\n  " : "") + errors[i];
    throw Error(ErrorCode::ParseFailed, "semantic errors:\n  " + joined);
  }
}

Program parseSnapshot(std::vector<SourceFile> files) {
  std::sort(files.begin(), files.end(),
            [](const SourceFile &a, const SourceFile &b) {
              return a.name < b.name;
            });
  ProgramAst ast;
  std::vector<std::string> parseErrors;
  for (const auto &f : files) {
    try {
      auto classes = parseUnit(f.text, f.name);
      for (auto &c : classes)
        ast.classes.push_back(std::move(c));
    } catch (const Error &e) {
      parseErrors.push_back(e.what());
    }
  }
  if (!parseErrors.empty()) {
    std::string joined;
    for (size_t i = 0; i < parseErrors.size(); ++i)
      joined += (i ? "\n" : "") + parseErrors[i];
    throw Error(ErrorCode::ParseFailed, joined);
  }
  return Program::fromAst(std::move(ast));
}

Program parseSnapshotDir(const std::string &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::ParseFailed, dir + " is not a directory");
  std::vector<SourceFile> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".moo")
      continue;
    std::ifstream in(entry.path());
    std::stringstream buf;
    buf << in.rdbuf();
    files.push_back({entry.path().filename().string(), buf.str()});
  }
  return parseSnapshot(std::move(files));
}

namespace {

int precedenceOf(BinOp op) {
  switch (op) {
  case BinOp::Or: return 1;
  case BinOp::And: return 2;
  case BinOp::Eq:
  case BinOp::Ne: return 3;
  case BinOp::Lt:
  case BinOp::Le:
  case BinOp::Gt:
  case BinOp::Ge: return 4;
  case BinOp::Add:
  case BinOp::Sub: return 5;
  case BinOp::Mul:
  case BinOp::Div: return 6;
  }
  return 0;
}

const char *binOpText(BinOp op) {
  switch (op) {
  case BinOp::Add: return "+";
  case BinOp::Sub: return "-";
  case BinOp::Mul: return "*";
  case BinOp::Div: return "/";
  case BinOp::Lt: return "<";
  case BinOp::Le: return "<=";
  case BinOp::Gt: return ">";
  case BinOp::Ge: return ">=";
  case BinOp::Eq: return "==";
  case BinOp::Ne: return "!=";
  case BinOp::And: return "&&";
  case BinOp::Or: return "||";
  }
  return "?";
}

class Printer {
public:
  std::string run(const ProgramAst &ast) {
    for (size_t i = 0; i < ast.classes.size(); ++i) {
      if (i)
        out_ << "\n";
      printClass(ast.classes[i]);
    }
    return out_.str();
  }

private:
  std::ostringstream out_;
  int indent_ = 0;

  void line() {
    for (int i = 0; i < indent_; ++i)
      out_ << "  ";
  }

  std::string typeText(const TypeRef &t) {
    switch (t.kind) {
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Void: return "void";
    case TypeKind::Class: return t.className;
    }
    return "?";
  }

  void printClass(const ClassDecl &c) {
    line();
    out_ << "class " << c.name;
    if (!c.superclass.empty())
      out_ << " extends " << c.superclass;
    out_ << " {\n";
    ++indent_;
    for (const auto &f : c.fields) {
      line();
      out_ << typeText(f.type) << " " << f.name << ";\n";
    }
    for (const auto &m : c.methods) {
      line();
      if (!m.isConstructor)
        out_ << typeText(m.returnType) << " ";
      out_ << m.name << "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i)
          out_ << ", ";
        out_ << typeText(m.params[i].type) << " " << m.params[i].name;
      }
      out_ << ")";
      if (m.isAbstract) {
        out_ << ";\n";
      } else {
        out_ << " {\n";
        ++indent_;
        for (const auto &s : m.body)
          printStmt(*s);
        --indent_;
        line();
        out_ << "}\n";
      }
    }
    --indent_;
    line();
    out_ << "}\n";
  }

  void printBlock(const std::vector<std::unique_ptr<Stmt>> &body) {
    out_ << " {\n";
    ++indent_;
    for (const auto &s : body)
      printStmt(*s);
    --indent_;
    line();
    out_ << "}";
  }

  void printStmt(const Stmt &s) {
    switch (s.kind) {
    case StmtKind::VarDecl:
      line();
      out_ << typeText(s.declType) << " " << s.target;
      if (s.expr) {
        out_ << " = ";
        printExpr(*s.expr, 0);
      }
      out_ << ";\n";
      return;
    case StmtKind::Assign:
      line();
      if (s.targetIsField)
        out_ << "this.";
      out_ << s.target << " = ";
      printExpr(*s.expr, 0);
      out_ << ";\n";
      return;
    case StmtKind::If:
      line();
      printIf(s);
      out_ << "\n";
      return;
    case StmtKind::While:
      line();
      out_ << "while (";
      printExpr(*s.expr, 0);
      out_ << ")";
      printBlock(s.body);
      out_ << "\n";
      return;
    case StmtKind::Return:
      line();
      out_ << "return";
      if (s.expr) {
        out_ << " ";
        printExpr(*s.expr, 0);
      }
      out_ << ";\n";
      return;
    case StmtKind::Assert:
      line();
      out_ << "assert ";
      printExpr(*s.expr, 0);
      out_ << ";\n";
      return;
    case StmtKind::ExprStmt:
      line();
      printExpr(*s.expr, 0);
      out_ << ";\n";
      return;
    }
  }

  void printIf(const Stmt &s) {
    out_ << "if (";
    printExpr(*s.expr, 0);
    out_ << ")";
    printBlock(s.body);
    if (!s.elseBody.empty()) {
      out_ << " else";
      if (s.elseBody.size() == 1 && s.elseBody[0]->kind == StmtKind::If) {
        out_ << " ";
        printIf(*s.elseBody[0]);
      } else {
        printBlock(s.elseBody);
      }
    }
  }

  void printExpr(const Expr &e, int parentPrec) {
    switch (e.kind) {
    case ExprKind::IntLit:
      out_ << e.intValue;
      return;
    case ExprKind::BoolLit:
      out_ << (e.boolValue ? "true" : "false");
      return;
    case ExprKind::NullLit:
      out_ << "null";
      return;
    case ExprKind::VarRef:
      out_ << e.name;
      return;
    case ExprKind::ThisField:
      out_ << "this." << e.name;
      return;
    case ExprKind::Binary: {
      int prec = precedenceOf(e.binOp);
      bool parens = prec < parentPrec;
      if (parens)
        out_ << "(";
      printExpr(*e.lhs, prec);
      out_ << " " << binOpText(e.binOp) << " ";
      // Left-associative grammar: parenthesize a right child of equal
      // precedence so it reparses as the same tree.
      printExpr(*e.rhs, prec + 1);
      if (parens)
        out_ << ")";
      return;
    }
    case ExprKind::Unary:
      out_ << (e.unOp == UnOp::Not ? "!" : "-");
      printExpr(*e.operand, 7);
      return;
    case ExprKind::New:
      out_ << "new " << e.name << "(";
      printArgs(e.args);
      out_ << ")";
      return;
    case ExprKind::Call:
      if (e.isSuper) {
        out_ << "super.";
      } else if (e.receiver) {
        printExpr(*e.receiver, 8);
        out_ << ".";
      }
      out_ << e.name << "(";
      printArgs(e.args);
      out_ << ")";
      return;
    }
  }

  void printArgs(const std::vector<std::unique_ptr<Expr>> &args) {
    for (size_t i = 0; i < args.size(); ++i) {
      if (i)
        out_ << ", ";
      printExpr(*args[i], 0);
    }
  }
};

} // namespace

std::string printProgram(const ProgramAst &ast) { return Printer().run(ast); }

Entities extractEntities(const Program &p, const ResolutionMode &mode,
                         const TestConfig &cfg) {
  Entities out;
  auto topo = p.classesInTopoOrder();

  for (const ClassDecl *c : topo) {
    Subject s;
    s.id = makeClassId(c->name);
    s.kind = SubjectKind::Class;
    s.identifier = c->name;
    if (!c->superclass.empty())
      s.superclassId = makeClassId(c->superclass);
    out.classes.push_back(std::move(s));
  }

  for (const ClassDecl *c : topo) {
    for (const auto &m : c->methods) {
      Subject s;
      s.id = makeMethodId(c->name, m.name, m.arity());
      s.kind = SubjectKind::Method;
      s.identifier = m.name;
      s.arity = m.arity();
      s.ownerId = makeClassId(c->name);
      s.isAbstract = m.isAbstract;
      s.isTest = !m.isConstructor && cfg.isTestMethod(c->name, m.name);
      out.methods.push_back(std::move(s));
    }
  }

  for (const ClassDecl *c : topo) {
    for (const auto &m : c->methods) {
      SubjectId ownerId = makeMethodId(c->name, m.name, m.arity());
      // Ordinal counts occurrences of the same callee/arity within one
      // body, in node-first preorder.
      std::map<std::pair<std::string, int>, int> ordinals;
      walkMethod(
          p, *c, m,
          [&](const Expr &call, const std::string &receiverClass) {
            bool viaNew = call.kind == ExprKind::New;
            if (viaNew && !mode.includeConstructors)
              return;
            int arity = static_cast<int>(call.args.size());
            int ordinal = ordinals[{call.name, arity}]++;
            Subject s;
            s.id = makeInvocationId(ownerId, call.name, arity, ordinal);
            s.kind = SubjectKind::Invocation;
            s.identifier = call.name;
            s.arity = arity;
            s.ownerId = ownerId;
            if (!receiverClass.empty())
              s.staticReceiverClassId = makeClassId(receiverClass);
            s.isSuper = call.kind == ExprKind::Call && call.isSuper;
            out.invocations.push_back(std::move(s));
          },
          nullptr, nullptr);
    }
  }
  return out;
}

} // namespace chtest
