#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "change_model.hpp"
#include "distiller.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "interp.hpp"
#include "program.hpp"
#include "selector.hpp"

namespace {

using namespace chtest;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBaseline = 3;

ResolutionMode parseMode(const std::string &name, bool constructors) {
  ResolutionMode m;
  m.mode = name == "poly" ? Mode::Polymorphic : Mode::Static;
  m.includeConstructors = constructors;
  return m;
}

void writeFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::MalformedDocument, "cannot write " + path);
  out << text;
}

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::MalformedDocument, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

long long stepBudgetFromEnv(long long fallback) {
  const char *s = std::getenv("CHTEST_STEP_BUDGET");
  if (!s || !*s)
    return fallback;
  try {
    long long v = std::stoll(s);
    if (v > 0)
      return v;
  } catch (...) {
  }
  std::cerr << "warning: ignoring invalid CHTEST_STEP_BUDGET\n";
  return fallback;
}

int runDistill(const std::vector<std::string> &dirs, const std::string &mode,
               bool constructors, const std::string &outPath,
               const TestConfig &cfg) {
  ResolutionMode rm = parseMode(mode, constructors);
  Program oldP = parseSnapshotDir(dirs.front());
  ChangeModel model = distillInitial(oldP, rm, cfg);
  if (dirs.size() == 2) {
    Program newP = parseSnapshotDir(dirs[1]);
    std::vector<Change> delta = distillDelta(model, oldP, newP, cfg);
    int adds = 0, mods = 0, removes = 0;
    for (const auto &c : delta) {
      if (c.kind == ChangeKind::Add)
        ++adds;
      else if (c.kind == ChangeKind::Modify)
        ++mods;
      else
        ++removes;
    }
    std::cout << "delta: " << delta.size() << " changes (" << adds << " add, "
              << mods << " modify, " << removes << " remove)\n";
  }
  writeFile(outPath, serialize(model));
  std::cout << "model: " << model.changes().size() << " changes, "
            << model.aliveSubjects().size() << " alive subjects -> " << outPath
            << "\n";
  return kExitOk;
}

int runSelect(const std::string &modelPath, const std::vector<int> &changeIds,
              const std::string &className, const TestConfig &cfg) {
  ChangeModel model = deserialize(readFile(modelPath));
  std::set<SubjectId> selected;
  if (!className.empty()) {
    // Accept a bare class name or the full subject id.
    SubjectId id = className.rfind("class:", 0) == 0 ? className
                                                     : makeClassId(className);
    selected = selectForClass(model, id, cfg);
  } else {
    SelectionResult res = selectRelevantTests(model, changeIds, cfg);
    for (const auto &d : res.diagnostics)
      std::cerr << "note: " << d << "\n";
    selected = res.allTests();
  }
  for (const auto &id : selected)
    std::cout << id << "\n";
  return kExitOk;
}

int runEvaluate(const std::string &dir, const std::string &modeA,
                const std::string &modeB, bool constructors,
                const std::string &outPath, const TestConfig &cfg) {
  Program p = parseSnapshotDir(dir);
  EvaluateOptions opts;
  opts.modeA = parseMode(modeA, constructors);
  opts.modeB = parseMode(modeB, constructors);
  opts.tests = cfg;
  opts.run.stepBudget = stepBudgetFromEnv(opts.run.stepBudget);
  EvaluateResult res = evaluateSnapshot(p, opts);
  if (!outPath.empty())
    writeFile(outPath, res.report.csv());
  std::cout << res.summaryText();
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Change-based test selection for MiniOO snapshots"};
  app.require_subcommand(1);

  TestConfig cfg;

  std::vector<std::string> distillDirs;
  std::string distillMode = "static";
  bool distillCtors = false;
  std::string distillOut;
  CLI::App *distill = app.add_subcommand(
      "distill", "Build a change model from one or two snapshot directories");
  distill->add_option("dirs", distillDirs, "old snapshot dir, then new")
      ->expected(1, 2)
      ->required();
  distill->add_option("--mode", distillMode, "invocation resolution")
      ->check(CLI::IsMember({"static", "poly"}));
  distill->add_flag("--constructors", distillCtors,
                    "track constructor invocations");
  distill->add_option("-o,--out", distillOut, "model output path")->required();

  std::string selectModel;
  std::vector<int> selectChanges;
  std::string selectClass;
  CLI::App *select = app.add_subcommand(
      "select", "Select tests relevant to changes or to a class");
  select->add_option("--model", selectModel, "serialized change model")
      ->required();
  auto *chOpt =
      select->add_option("--change", selectChanges, "change ids to query");
  auto *clOpt = select->add_option("--class", selectClass,
                                   "class whose methods to query");
  chOpt->excludes(clOpt);

  std::string evalDir;
  std::string evalModeA = "static";
  std::string evalModeB = "poly";
  bool evalCtors = false;
  std::string evalOut;
  CLI::App *evaluate = app.add_subcommand(
      "evaluate", "Mutation-score full vs reduced suites on a snapshot");
  evaluate->add_option("dir", evalDir, "snapshot directory")->required();
  evaluate->add_option("--mode-a", evalModeA, "first resolution mode")
      ->check(CLI::IsMember({"static", "poly"}));
  evaluate->add_option("--mode-b", evalModeB, "second resolution mode")
      ->check(CLI::IsMember({"static", "poly"}));
  evaluate->add_flag("--constructors", evalCtors,
                     "track constructor invocations");
  evaluate->add_option("-o,--out", evalOut, "report CSV output path");

  for (CLI::App *sub : {distill, select, evaluate}) {
    sub->add_option("--tests-pattern", cfg.testClassPattern,
                    "glob alternatives naming test classes");
    sub->add_option("--test-methods-pattern", cfg.testMethodPattern,
                    "glob alternatives naming test methods");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Help and version are clean exits; everything else is an input error.
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (distill->parsed())
      return runDistill(distillDirs, distillMode, distillCtors, distillOut,
                        cfg);
    if (select->parsed())
      return runSelect(selectModel, selectChanges, selectClass, cfg);
    return runEvaluate(evalDir, evalModeA, evalModeB, evalCtors, evalOut, cfg);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BaselineFailure ? kExitBaseline : kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
