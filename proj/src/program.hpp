#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "change_model.hpp"
#include "test_config.hpp"

namespace chtest {

struct SourceFile {
  std::string name;
  std::string text;
};

// A parsed and semantically resolved snapshot. Moving keeps internal
// pointers valid (they point into the vector's heap storage); copying is
// disabled, clone the ast and re-resolve instead.
class Program {
public:
  ProgramAst ast;
  // Non-fatal findings: unresolved receivers/members, suspicious news.
  std::vector<std::string> warnings;

  Program(Program &&) = default;
  Program &operator=(Program &&) = default;
  Program(const Program &) = delete;
  Program &operator=(const Program &) = delete;

  // Resolves and validates; throws Error(ParseFailed) listing all
  // semantic errors.
  static Program fromAst(ProgramAst ast);

  const ClassDecl *findClass(const std::string &name) const;
  const ClassDecl *superOf(const ClassDecl &cls) const;
  // Inheritance depth; roots are 0.
  int depth(const ClassDecl &cls) const;
  // Classes ordered by (depth, name): containers before contained users.
  std::vector<const ClassDecl *> classesInTopoOrder() const;

  // Nearest declaration of name/arity at or above cls.
  const MethodDecl *lookup(const ClassDecl &cls, const std::string &name,
                           int arity,
                           const ClassDecl **ownerOut = nullptr) const;
  // Nearest non-abstract declaration.
  const MethodDecl *lookupConcrete(const ClassDecl &cls,
                                   const std::string &name, int arity,
                                   const ClassDecl **ownerOut = nullptr) const;
  // Declared field type, walking the superclass chain.
  const TypeRef *fieldType(const ClassDecl &cls, const std::string &name) const;
  // True if cls has an abstract method with no concrete override at cls.
  bool hasUnimplementedAbstract(const ClassDecl &cls) const;

private:
  Program() = default;
  std::map<std::string, const ClassDecl *> byName_;
  std::map<const ClassDecl *, int> depth_;
  void resolve();
};

// Files are sorted by name before parsing so class order is independent
// of input order.
Program parseSnapshot(std::vector<SourceFile> files);
// Reads every .moo file in dir (sorted).
Program parseSnapshotDir(const std::string &dir);

// Pretty-prints the program; parse(print(p)) is structurally equal to p.
std::string printProgram(const ProgramAst &ast);

// One invocation site in a method body, in node-first preorder.
struct InvocationSite {
  Subject subject;
};

struct Entities {
  std::vector<Subject> classes;     // topo order (depth, name)
  std::vector<Subject> methods;     // class topo order, declaration order
  std::vector<Subject> invocations; // method order, body preorder
};

// Extracts the subject universe of a snapshot. Constructor calls become
// invocation subjects only when mode.includeConstructors is set;
// constructors themselves are never test methods.
Entities extractEntities(const Program &p, const ResolutionMode &mode,
                         const TestConfig &cfg);

} // namespace chtest
