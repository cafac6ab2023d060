#pragma once

#include <memory>
#include <string>
#include <vector>

namespace chtest {

struct Span {
  int line = 0;
  int col = 0;
};

enum class TypeKind { Int, Bool, Class, Void };

struct TypeRef {
  TypeKind kind = TypeKind::Void;
  std::string className; // set iff kind == Class
  bool operator==(const TypeRef &) const = default;
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Not, Neg };

enum class ExprKind {
  IntLit,
  BoolLit,
  NullLit,
  VarRef,
  ThisField,
  Binary,
  Unary,
  New,
  Call
};

struct Expr {
  ExprKind kind;
  Span span;
  long long intValue = 0; // IntLit
  bool boolValue = false; // BoolLit
  std::string name;       // VarRef/ThisField: name; New: class; Call: method
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Not;
  std::unique_ptr<Expr> lhs, rhs; // Binary
  std::unique_ptr<Expr> operand;  // Unary
  // Call receiver; null means implicit this (or super when isSuper).
  std::unique_ptr<Expr> receiver;
  bool isSuper = false;
  std::vector<std::unique_ptr<Expr>> args; // New, Call

  std::unique_ptr<Expr> clone() const;
};

enum class StmtKind { VarDecl, Assign, If, While, Return, Assert, ExprStmt };

struct Stmt {
  StmtKind kind;
  Span span;
  TypeRef declType;           // VarDecl
  std::string target;         // VarDecl/Assign target name
  bool targetIsField = false; // Assign to explicit this.<target>
  // VarDecl init (may be null), Assign rhs, If/While condition,
  // Return value (may be null), Assert operand, ExprStmt expression.
  std::unique_ptr<Expr> expr;
  std::vector<std::unique_ptr<Stmt>> body;     // If then / While body
  std::vector<std::unique_ptr<Stmt>> elseBody; // If else

  std::unique_ptr<Stmt> clone() const;
};

struct Param {
  TypeRef type;
  std::string name;
  bool operator==(const Param &) const = default;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> params;
  TypeRef returnType;
  bool isAbstract = false;    // declared with ';' instead of a body
  bool isConstructor = false; // declared without a return type
  std::vector<std::unique_ptr<Stmt>> body;
  Span span;

  int arity() const { return static_cast<int>(params.size()); }
  MethodDecl clone() const;
};

struct FieldDecl {
  TypeRef type;
  std::string name;
  Span span;
};

struct ClassDecl {
  std::string name;
  std::string superclass; // empty = none
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  Span span;

  ClassDecl clone() const;
};

struct ProgramAst {
  // Declaration order: files sorted by name, classes in file order.
  std::vector<ClassDecl> classes;

  ProgramAst clone() const;
};

// Structural equality ignoring spans; drives method body diffing.
bool astEquals(const Expr &a, const Expr &b);
bool astEquals(const Stmt &a, const Stmt &b);
bool astEquals(const MethodDecl &a, const MethodDecl &b);
bool astEquals(const ClassDecl &a, const ClassDecl &b);

} // namespace chtest
