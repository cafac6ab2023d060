#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "change_model.hpp"
#include "doctest.h"

using namespace chtest;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = CHTEST_FIXTURE_DIR;
const std::string kBin = CHTEST_BIN;

struct CmdResult {
  int exitCode = -1;
  std::string out;
  std::string err;
};

fs::path scratchDir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "chtest-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CmdResult run(const std::string &args, const std::string &envPrefix = "") {
  fs::path errFile = scratchDir() / "stderr.txt";
  std::string cmd =
      envPrefix + kBin + " " + args + " 2>" + errFile.string();
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
    r.out.append(buf, n);
  int status = pclose(pipe);
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errFile);
  return r;
}

fs::path writeSnapshot(const std::string &name, const std::string &source) {
  fs::path dir = scratchDir() / name;
  fs::create_directories(dir);
  std::ofstream(dir / "code.moo") << source;
  return dir;
}

} // namespace

TEST_CASE("distill writes a loadable model and reports its size") {
  fs::path model = scratchDir() / "fig2-poly.json";
  CmdResult r = run("distill " + kFixtures + "/fig2 --mode poly -o " +
                    model.string());
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("model: 8 changes, 8 alive subjects") != std::string::npos);

  ChangeModel m = deserialize(slurp(model));
  CHECK(m.resolutionMode().mode == Mode::Polymorphic);
  CHECK(m.isAlive("method:Bar.foo/0"));
}

TEST_CASE("distill over two snapshots appends the delta") {
  fs::path model = scratchDir() / "fig4-evolved.json";
  CmdResult r = run("distill " + kFixtures + "/fig4pre " + kFixtures +
                    "/fig4post --mode poly -o " + model.string());
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("delta: ") != std::string::npos);

  ChangeModel m = deserialize(slurp(model));
  CHECK(m.isAlive("method:Type1.getValue/0"));
  CHECK_FALSE(m.isAlive("method:Base.getType1Value/0"));
}

TEST_CASE("distill input errors exit with code 2") {
  CHECK(run("distill").exitCode == 2);
  CHECK(run("distill /nonexistent-dir -o /tmp/x.json").exitCode == 2);
  CHECK(run("distill " + kFixtures + "/fig2 --mode sideways -o /tmp/x.json")
            .exitCode == 2);
}

TEST_CASE("select answers class queries with test classes") {
  fs::path poly = scratchDir() / "sel-poly.json";
  fs::path stat = scratchDir() / "sel-static.json";
  REQUIRE(run("distill " + kFixtures + "/fig2 --mode poly -o " + poly.string())
              .exitCode == 0);
  REQUIRE(run("distill " + kFixtures + "/fig2 --mode static -o " +
              stat.string())
              .exitCode == 0);

  CmdResult polyBar =
      run("select --model " + poly.string() + " --class class:Bar");
  CHECK(polyBar.exitCode == 0);
  CHECK(polyBar.out == "class:FooBarTest\n");

  // Statically invisible override: empty output is still success.
  CmdResult statBar =
      run("select --model " + stat.string() + " --class class:Bar");
  CHECK(statBar.exitCode == 0);
  CHECK(statBar.out.empty());

  CmdResult unknown =
      run("select --model " + poly.string() + " --class class:Nope");
  CHECK(unknown.exitCode == 2);
  CHECK(unknown.err.find("error:") != std::string::npos);
}

TEST_CASE("select answers change queries with test methods") {
  fs::path poly = scratchDir() / "sel-change-poly.json";
  REQUIRE(run("distill " + kFixtures + "/fig2 --mode poly -o " + poly.string())
              .exitCode == 0);
  ChangeModel m = deserialize(slurp(poly));
  int barAdd = m.aliveAddOf("method:Bar.foo/0");
  REQUIRE(barAdd >= 0);

  CmdResult r = run("select --model " + poly.string() + " --change " +
                    std::to_string(barAdd));
  CHECK(r.exitCode == 0);
  CHECK(r.out == "method:FooBarTest.fooTest/0\n");

  // Unknown ids are degenerate, not fatal: empty selection plus a note.
  CmdResult deg = run("select --model " + poly.string() + " --change 99999");
  CHECK(deg.exitCode == 0);
  CHECK(deg.out.empty());
  CHECK(deg.err.find("note:") != std::string::npos);

  CmdResult both = run("select --model " + poly.string() +
                       " --change 1 --class class:Bar");
  CHECK(both.exitCode == 2);

  CHECK(run("select --class class:Bar").exitCode == 2);
  CHECK(run("select --model /nonexistent.json --class class:Bar").exitCode ==
        2);
}

TEST_CASE("test naming patterns reach the selector") {
  fs::path dir = writeSnapshot("patterns",
                               "class Machine { int go() { return 3; } }\n"
                               "class Checks {\n"
                               "  Machine m;\n"
                               "  void SetUp() { m = new Machine(); }\n"
                               "  void check1() { assert m.go() == 3; }\n"
                               "}\n");
  fs::path model = scratchDir() / "patterns.json";
  std::string patterns =
      " --tests-pattern Checks --test-methods-pattern \"check*\"";
  REQUIRE(run("distill " + dir.string() + " --mode poly -o " + model.string() +
              patterns)
              .exitCode == 0);

  CmdResult r = run("select --model " + model.string() +
                    " --class class:Machine" + patterns);
  CHECK(r.exitCode == 0);
  CHECK(r.out == "class:Checks\n");

  // Default patterns do not classify check1 as a test.
  CmdResult bare =
      run("select --model " + model.string() + " --class class:Machine");
  CHECK(bare.exitCode == 0);
  CHECK(bare.out.empty());
}

TEST_CASE("evaluate emits a stable report and CSV") {
  fs::path csv1 = scratchDir() / "report1.csv";
  fs::path csv2 = scratchDir() / "report2.csv";

  CmdResult r1 = run("evaluate " + kFixtures + "/dispatch_heavy -o " +
                     csv1.string());
  CHECK(r1.exitCode == 0);
  CHECK(r1.out.find("killed-mutant difference") != std::string::npos);

  CmdResult r2 = run("evaluate " + kFixtures + "/dispatch_heavy -o " +
                     csv2.string());
  CHECK(r2.exitCode == 0);
  CHECK(r1.out == r2.out);

  std::string bytes1 = slurp(csv1);
  CHECK(bytes1 == slurp(csv2));
  CHECK(bytes1.rfind("class,mutants,killed_full,killed_staticreduced,"
                     "killed_polyreduced,classification\n",
                     0) == 0);
}

TEST_CASE("evaluate exits 3 when the baseline suite fails") {
  fs::path dir = writeSnapshot("redbaseline",
                               "class Off { int one() { return 1; } }\n"
                               "class OffTest {\n"
                               "  Off o;\n"
                               "  void SetUp() { o = new Off(); }\n"
                               "  void testOne() { assert o.one() == 2; }\n"
                               "}\n");
  CmdResult r = run("evaluate " + dir.string());
  CHECK(r.exitCode == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("the step budget environment variable reaches evaluate") {
  CmdResult tiny = run("evaluate " + kFixtures + "/dispatch_heavy",
                       "CHTEST_STEP_BUDGET=5 ");
  CHECK(tiny.exitCode == 3);

  CmdResult junk = run("evaluate " + kFixtures + "/dispatch_heavy",
                       "CHTEST_STEP_BUDGET=banana ");
  CHECK(junk.exitCode == 0);
  CHECK(junk.err.find("CHTEST_STEP_BUDGET") != std::string::npos);
}

TEST_CASE("top-level argument errors exit with code 2") {
  CHECK(run("").exitCode == 2);
  CHECK(run("bogus-subcommand").exitCode == 2);
  CHECK(run("--help").exitCode == 0);
  CHECK(run("evaluate --help").exitCode == 0);
}
