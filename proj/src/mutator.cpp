#include "mutator.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <sstream>

#include "errors.hpp"

namespace chtest {

namespace {

// One applicable (operator, node) pair found during the walk. stmt and
// expr point into the walked AST; exactly one of them is set.
struct Site {
  MutOp op;
  std::string cls;
  std::string method; // name/arity
  Span span;
  Stmt *stmt = nullptr;
  Expr *expr = nullptr;
  const char *desc = "";
};

bool arithSwap(BinOp op, BinOp &out, const char *&desc) {
  switch (op) {
  case BinOp::Add:
    out = BinOp::Sub;
    desc = "+ -> -";
    return true;
  case BinOp::Sub:
    out = BinOp::Add;
    desc = "- -> +";
    return true;
  case BinOp::Mul:
    out = BinOp::Div;
    desc = "* -> /";
    return true;
  case BinOp::Div:
    out = BinOp::Mul;
    desc = "/ -> *";
    return true;
  default:
    return false;
  }
}

bool boundarySwap(BinOp op, BinOp &out, const char *&desc) {
  switch (op) {
  case BinOp::Lt:
    out = BinOp::Le;
    desc = "< -> <=";
    return true;
  case BinOp::Le:
    out = BinOp::Lt;
    desc = "<= -> <";
    return true;
  case BinOp::Gt:
    out = BinOp::Ge;
    desc = "> -> >=";
    return true;
  case BinOp::Ge:
    out = BinOp::Gt;
    desc = ">= -> >";
    return true;
  default:
    return false;
  }
}

// Single source of truth for enumeration order; both generateMutants and
// applyMutant walk the same way, so ordinals line up.
class SiteCollector {
public:
  std::vector<Site> sites;

  void walk(ProgramAst &ast) {
    for (auto &cls : ast.classes)
      for (auto &m : cls.methods) {
        cls_ = cls.name;
        method_ = m.name + "/" + std::to_string(m.arity());
        returnType_ = m.isConstructor ? nullptr : &m.returnType;
        for (auto &st : m.body)
          walkStmt(*st);
      }
  }

private:
  std::string cls_;
  std::string method_;
  const TypeRef *returnType_ = nullptr;

  void add(MutOp op, const Span &span, Stmt *st, Expr *ex, const char *desc) {
    sites.push_back({op, cls_, method_, span, st, ex, desc});
  }

  void walkStmt(Stmt &s) {
    switch (s.kind) {
    case StmtKind::If:
    case StmtKind::While:
      add(MutOp::ConditionalNegate, s.span, &s, nullptr, "negate condition");
      walkExpr(*s.expr);
      for (auto &st : s.body)
        walkStmt(*st);
      for (auto &st : s.elseBody)
        walkStmt(*st);
      return;
    case StmtKind::Return:
      if (s.expr && returnType_) {
        if (returnType_->kind == TypeKind::Int)
          add(MutOp::ReturnValueMutate, s.span, &s, nullptr, "r -> r+1");
        else if (returnType_->kind == TypeKind::Bool)
          add(MutOp::ReturnValueMutate, s.span, &s, nullptr, "r -> !r");
      }
      if (s.expr)
        walkExpr(*s.expr);
      return;
    default:
      if (s.expr)
        walkExpr(*s.expr);
      return;
    }
  }

  void walkExpr(Expr &e) {
    switch (e.kind) {
    case ExprKind::BoolLit:
      add(MutOp::BooleanLiteralFlip, e.span, nullptr, &e,
          e.boolValue ? "true -> false" : "false -> true");
      return;
    case ExprKind::Binary: {
      BinOp swapped;
      const char *desc;
      if (arithSwap(e.binOp, swapped, desc))
        add(MutOp::ArithmeticReplace, e.span, nullptr, &e, desc);
      else if (boundarySwap(e.binOp, swapped, desc))
        add(MutOp::BoundaryShift, e.span, nullptr, &e, desc);
      walkExpr(*e.lhs);
      walkExpr(*e.rhs);
      return;
    }
    case ExprKind::Unary:
      walkExpr(*e.operand);
      return;
    case ExprKind::New:
    case ExprKind::Call:
      if (e.receiver)
        walkExpr(*e.receiver);
      for (auto &a : e.args)
        walkExpr(*a);
      return;
    default:
      return;
    }
  }
};

std::unique_ptr<Expr> wrapNot(std::unique_ptr<Expr> inner) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Unary;
  e->span = inner->span;
  e->unOp = UnOp::Not;
  e->operand = std::move(inner);
  return e;
}

std::unique_ptr<Expr> wrapPlusOne(std::unique_ptr<Expr> inner) {
  auto one = std::make_unique<Expr>();
  one->kind = ExprKind::IntLit;
  one->span = inner->span;
  one->intValue = 1;
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Binary;
  e->span = inner->span;
  e->binOp = BinOp::Add;
  e->lhs = std::move(inner);
  e->rhs = std::move(one);
  return e;
}

void mutateSite(Site &s) {
  switch (s.op) {
  case MutOp::ArithmeticReplace: {
    BinOp swapped = s.expr->binOp;
    const char *desc;
    arithSwap(s.expr->binOp, swapped, desc);
    s.expr->binOp = swapped;
    return;
  }
  case MutOp::BoundaryShift: {
    BinOp swapped = s.expr->binOp;
    const char *desc;
    boundarySwap(s.expr->binOp, swapped, desc);
    s.expr->binOp = swapped;
    return;
  }
  case MutOp::BooleanLiteralFlip:
    s.expr->boolValue = !s.expr->boolValue;
    return;
  case MutOp::ConditionalNegate:
    s.stmt->expr = wrapNot(std::move(s.stmt->expr));
    return;
  case MutOp::ReturnValueMutate:
    if (std::string(s.desc) == "r -> r+1")
      s.stmt->expr = wrapPlusOne(std::move(s.stmt->expr));
    else
      s.stmt->expr = wrapNot(std::move(s.stmt->expr));
    return;
  }
}

ProgramAst cloneAst(const ProgramAst &ast) {
  ProgramAst out;
  out.classes.reserve(ast.classes.size());
  for (const auto &c : ast.classes)
    out.classes.push_back(c.clone());
  return out;
}

} // namespace

const char *mutOpName(MutOp op) {
  switch (op) {
  case MutOp::ArithmeticReplace:
    return "ArithmeticReplace";
  case MutOp::ConditionalNegate:
    return "ConditionalNegate";
  case MutOp::BoundaryShift:
    return "BoundaryShift";
  case MutOp::ReturnValueMutate:
    return "ReturnValueMutate";
  case MutOp::BooleanLiteralFlip:
    return "BooleanLiteralFlip";
  }
  return "?";
}

std::vector<Mutant>
generateMutants(const Program &p,
                const std::optional<std::set<std::string>> &classFilter) {
  ProgramAst scratch = cloneAst(p.ast);
  SiteCollector c;
  c.walk(scratch);
  std::vector<Mutant> out;
  for (size_t i = 0; i < c.sites.size(); ++i) {
    const Site &s = c.sites[i];
    if (classFilter && !classFilter->count(s.cls))
      continue;
    out.push_back({static_cast<int>(i), s.cls, s.method, s.op, s.span,
                   s.desc});
  }
  return out;
}

Program applyMutant(const Program &p, const Mutant &m) {
  ProgramAst ast = cloneAst(p.ast);
  SiteCollector c;
  c.walk(ast);
  if (m.mutantId < 0 || static_cast<size_t>(m.mutantId) >= c.sites.size())
    throw Error(ErrorCode::UnknownChange,
                "mutant id out of range: " + std::to_string(m.mutantId));
  mutateSite(c.sites[static_cast<size_t>(m.mutantId)]);
  return Program::fromAst(std::move(ast));
}

bool KillMatrix::killsMutant(int mutantId,
                             const std::set<SubjectId> &suite) const {
  auto it = results.find(mutantId);
  if (it == results.end())
    return false;
  for (const auto &testId : suite) {
    auto r = it->second.find(testId);
    if (r != it->second.end() && r->second != TestStatus::Pass)
      return true;
  }
  return false;
}

std::set<int> KillMatrix::killedBy(const std::set<SubjectId> &suite) const {
  std::set<int> out;
  for (const auto &m : mutants)
    if (killsMutant(m.mutantId, suite))
      out.insert(m.mutantId);
  return out;
}

std::set<std::string>
KillMatrix::coveredClasses(const std::set<SubjectId> &suite) const {
  std::set<std::string> out;
  for (const auto &testId : suite) {
    auto it = baseline.find(testId);
    if (it == baseline.end())
      continue;
    out.insert(it->second.executedClasses.begin(),
               it->second.executedClasses.end());
  }
  return out;
}

KillMatrix buildKillMatrix(const Program &p, const std::vector<Mutant> &mutants,
                           const std::vector<TestRef> &tests,
                           const RunOptions &opts) {
  KillMatrix out;
  out.mutants = mutants;
  out.tests = tests;
  out.baseline = runSuite(p, tests, opts);
  std::vector<std::string> failing;
  for (const auto &[id, o] : out.baseline)
    if (o.status != TestStatus::Pass)
      failing.push_back(id + " (" + o.message + ")");
  if (!failing.empty()) {
    std::string msg = "baseline tests do not pass:";
    for (const auto &f : failing)
      msg += "\n  " + f;
    throw Error(ErrorCode::BaselineFailure, msg);
  }
  for (const auto &m : mutants) {
    Program pm = applyMutant(p, m);
    auto &row = out.results[m.mutantId];
    for (const auto &t : tests)
      row[t.methodId()] = runTest(pm, t, opts).status;
  }
  return out;
}

CoverageStats mutationCoverage(const KillMatrix &m,
                               const std::set<SubjectId> &suite) {
  CoverageStats out;
  std::set<std::string> covered = m.coveredClasses(suite);
  for (const auto &mut : m.mutants) {
    if (!covered.count(mut.targetClass)) {
      ++out.uncovered;
      continue;
    }
    ++out.introduced;
    if (m.killsMutant(mut.mutantId, suite))
      ++out.killed;
  }
  out.coverage =
      out.introduced ? static_cast<double>(out.killed) / out.introduced : 0.0;
  return out;
}

namespace {

std::set<std::string> testClassesOf(const KillMatrix &m,
                                    const std::set<SubjectId> &suite) {
  std::set<std::string> out;
  for (const auto &t : m.tests)
    if (suite.count(t.methodId()))
      out.insert(t.className);
  return out;
}

std::string fmt3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

} // namespace

ComparisonReport
compareSuites(const KillMatrix &matrix, const std::set<SubjectId> &fullSuite,
              const std::map<std::string, std::set<SubjectId>> &reducedA,
              const std::map<std::string, std::set<SubjectId>> &reducedB) {
  static const std::set<SubjectId> kEmpty;
  auto suiteFor = [](const std::map<std::string, std::set<SubjectId>> &m,
                     const std::string &cls) -> const std::set<SubjectId> & {
    auto it = m.find(cls);
    return it == m.end() ? kEmpty : it->second;
  };

  std::map<std::string, std::vector<const Mutant *>> byClass;
  for (const auto &m : matrix.mutants)
    byClass[m.targetClass].push_back(&m);

  std::set<std::string> fullCovered = matrix.coveredClasses(fullSuite);
  size_t fullClassCount = testClassesOf(matrix, fullSuite).size();

  ComparisonReport rep;
  double sumRedA = 0.0, sumRedB = 0.0;
  for (const auto &[cls, muts] : byClass) {
    const auto &suiteA = suiteFor(reducedA, cls);
    const auto &suiteB = suiteFor(reducedB, cls);
    std::set<std::string> coveredA = matrix.coveredClasses(suiteA);
    std::set<std::string> coveredB = matrix.coveredClasses(suiteB);
    ClassComparison row;
    row.className = cls;
    row.mutants = static_cast<int>(muts.size());
    for (const Mutant *m : muts) {
      if (matrix.killsMutant(m->mutantId, fullSuite))
        ++row.killedFull;
      if (matrix.killsMutant(m->mutantId, suiteA))
        ++row.killedA;
      if (matrix.killsMutant(m->mutantId, suiteB))
        ++row.killedB;
    }
    if (fullCovered.count(cls))
      row.coverageFull = static_cast<double>(row.killedFull) / row.mutants;
    if (coveredA.count(cls))
      row.coverageA = static_cast<double>(row.killedA) / row.mutants;
    if (coveredB.count(cls))
      row.coverageB = static_cast<double>(row.killedB) / row.mutants;
    row.classification = row.killedB > row.killedA   ? "improved"
                         : row.killedB < row.killedA ? "worsened"
                                                     : "same";
    rep.totalMutants += row.mutants;
    rep.totalKilledFull += row.killedFull;
    rep.totalKilledA += row.killedA;
    rep.totalKilledB += row.killedB;
    if (fullClassCount) {
      sumRedA += static_cast<double>(testClassesOf(matrix, suiteA).size()) /
                 static_cast<double>(fullClassCount);
      sumRedB += static_cast<double>(testClassesOf(matrix, suiteB).size()) /
                 static_cast<double>(fullClassCount);
    }
    rep.rows.push_back(std::move(row));
  }
  rep.killedDifference = rep.totalKilledB - rep.totalKilledA;
  if (!rep.rows.empty() && fullClassCount) {
    rep.meanReductionA = sumRedA / static_cast<double>(rep.rows.size());
    rep.meanReductionB = sumRedB / static_cast<double>(rep.rows.size());
  }
  return rep;
}

std::string ComparisonReport::csv() const {
  std::ostringstream os;
  os << "class,mutants,killed_full,killed_staticreduced,killed_polyreduced,"
        "classification\n";
  for (const auto &r : rows)
    os << r.className << "," << r.mutants << "," << r.killedFull << ","
       << r.killedA << "," << r.killedB << "," << r.classification << "\n";
  return os.str();
}

std::string ComparisonReport::summary() const {
  int improved = 0, same = 0, worsened = 0;
  for (const auto &r : rows) {
    if (r.classification == "improved")
      ++improved;
    else if (r.classification == "worsened")
      ++worsened;
    else
      ++same;
  }
  std::ostringstream os;
  os << "classes with mutants: " << rows.size() << "\n";
  os << "mutants: " << totalMutants << "\n";
  os << "killed by full suite: " << totalKilledFull << "\n";
  os << "killed by static-reduced suites: " << totalKilledA << "\n";
  os << "killed by poly-reduced suites: " << totalKilledB << "\n";
  os << "killed-mutant difference (poly - static): " << killedDifference
     << "\n";
  os << "mean suite reduction ratio: static " << fmt3(meanReductionA)
     << ", poly " << fmt3(meanReductionB) << "\n";
  os << "classes improved/same/worsened (poly vs static): " << improved << "/"
     << same << "/" << worsened << "\n";
  return os.str();
}

} // namespace chtest
