#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "defobs/scenario.hpp"
#include "support/generators.hpp"

using namespace defobs;
using testgen::Rng;

namespace {

std::string source_dir() {
  if (const char* s = std::getenv("DEFOBS_SOURCE_DIR")) return s;
  return DEFOBS_SOURCE_PATH;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string scenario(const std::string& name) { return source_dir() + "/scenarios/" + name; }

struct Result {
  int code;
  std::string out;
};

Result cli(const std::string& args) {
  const char* bin = std::getenv("DEFOBS_CLI");
  if (!bin) bin = DEFOBS_CLI_PATH;
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, f)) out.append(buf, n);
  int status = pclose(f);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string without_elapsed(const std::string& report) {
  std::string out;
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("elapsed:", 0) != 0) out += line + "\n";
  return out;
}

std::string solution_lines(const std::string& report) {
  std::string out;
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("solution ", 0) == 0) out += line + "\n";
  return out;
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Scenario, MinimalParses) {
  Scenario sc = parse_scenario(
      "tower Fp[t]/t^n p=2 n=2 ; Fp[t]/t^n p=2 n=1 ; Fp[t]/t^n p=2 n=1\n"
      "complex F R lo=0 ranks=1\n"
      "complex Gbar Rbar lo=0 ranks=1\n"
      "map s F F\n"
      "component s 0 [[1]]\n"
      "problem F F s Gbar\n"
      "task check\n");
  EXPECT_EQ(sc.task, Task::Check);
  EXPECT_TRUE(obstruction_class(sc.problem()).is_zero);
}

TEST(Scenario, ShapeMismatchNamesTheDegree) {
  try {
    parse_scenario(slurp(scenario("bad_shape.scn")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_NE(std::string(e.what()).find("d^0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Scenario, ParseErrorsAreLocated) {
  try {
    parse_scenario("tower Fp[t]/t^n p=2 n=2 ; Fp[t]/t^n p=2 n=1 ; Fp[t]/t^n p=2 n=1\ncomplex F R lo=0 ranks=1,1\nd F 0 [[1,]]\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3, column 11"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of("frobnicate\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("tower Fp[t]/t^n p=2 n=2\n"), ErrorCode::ParseError);
}

TEST(Scenario, ValidationErrors) {
  const std::string tower = "tower Fp[t]/t^n p=2 n=2 ; Fp[t]/t^n p=2 n=1 ; Fp[t]/t^n p=2 n=1\n";
  // Not a small extension surfaces as a validation error.
  EXPECT_EQ(code_of("tower Fp[t]/t^n p=2 n=3 ; Fp[t]/t^n p=2 n=1 ; Fp[t]/t^n p=2 n=1\n"), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(tower + "complex F Rx lo=0 ranks=1\n"), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(tower + "complex F R lo=0 ranks=1,1\nd F 0 [[1]]\ncomplex G R lo=0 ranks=1,1\nd G 0 [[1]]\n"
                           "complex Gbar Rbar lo=0 ranks=1,1\nmap s F G\nproblem F G s Gbar\n"),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of(tower + "map s F F\n"), ErrorCode::ValidationError);
  EXPECT_EQ(code_of(tower + "complex F R lo=0 ranks=1,1\nd F 0 [[(0,1)]]\n"), ErrorCode::ValidationError);
}

TEST(Scenario, RandomProblemsRoundTrip) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    Tower T = testgen::ladder_step(trial % 2 ? 3 : 2, trial % 3, trial % 4 == 0);
    LiftProblem p = testgen::random_problem(rng, T, {testgen::uniform(rng, 1, 3), 2, 5, trial % 5 == 0});
    Scenario sc = parse_scenario(format_problem(p));
    LiftProblem q = sc.problem();
    EXPECT_EQ(q.F(), p.F());
    EXPECT_EQ(q.G(), p.G());
    EXPECT_EQ(q.Gbar(), p.Gbar());
    EXPECT_TRUE(q.s() == p.s());
  }
}

TEST(Scenario, EmbeddedSolutionsVerify) {
  Rng rng(22);
  int lifted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Tower T = testgen::ladder_step(trial % 2 ? 3 : 2, trial % 2);
    LiftProblem p = testgen::random_problem(rng, T, {2, 2, 4, false});
    std::string text = format_problem(p);
    std::string report = run_scenario(parse_scenario(text), Task::Lift);
    if (report.find("lift_found: true") == std::string::npos) continue;
    ++lifted;
    if (p.F().is_zero_object()) continue;
    Scenario back = parse_scenario(text + solution_lines(report));
    ASSERT_TRUE(back.solution.has_value());
    EXPECT_TRUE(back.solution->verify(p));
    EXPECT_NE(run_scenario(back, Task::Check).find("solution_valid: true"), std::string::npos);
  }
  EXPECT_GT(lifted, 10);
}

TEST(Scenario, CorruptedSolutionIsReported) {
  std::string text = slurp(scenario("identity.scn"));
  Scenario sc = parse_scenario(text + "solution d 0 []\nsolution s 0 [[(1,1)]]\n");
  EXPECT_NE(run_scenario(sc, Task::Check).find("solution_valid: true"), std::string::npos);
  sc = parse_scenario(text + "solution d 0 []\nsolution s 0 [[2]]\n");
  EXPECT_NE(run_scenario(sc, Task::Check).find("solution_failure: sbar does not reduce to s"), std::string::npos);
}

TEST(Scenario, GoldenA2Reports) {
  Scenario sc = parse_scenario(slurp(scenario("a2_demo.scn")));
  EXPECT_EQ(sc.task, Task::Tower);
  EXPECT_EQ(run_scenario(sc, Task::Tower), slurp(scenario("a2_demo.expected")));
  EXPECT_EQ(run_scenario(sc, Task::DemoSod), slurp(scenario("a2_demo_sod.expected")));
}

TEST(Cli, ObstructedCheckExitsZero) {
  Result r = cli("check " + scenario("mult_t.scn"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("is_zero: false"), std::string::npos);
  EXPECT_NE(r.out.find("conventions: "), std::string::npos);
}

TEST(Cli, LiftEmbedsMatrices) {
  Result r = cli("lift " + scenario("identity.scn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solution s 0 [[(1,0)]]"), std::string::npos) << r.out;
}

TEST(Cli, ClassifyReportsTheKeys) {
  Result r = cli("classify " + scenario("two_classes.scn"));
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"h_minus1_dim: 1", "h0_dim: 1", "h1_dim: 0", "class_coordinates: []", "is_zero: true",
                          "lift_found: true", "lift_class_count: 3", "torsor_certified: false"})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
}

TEST(Cli, OracleReport) {
  Result r = cli("oracle " + scenario("identity.scn"));
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"candidates_scanned: 3", "lifts_found: 3", "classes: 1", "elapsed: "})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
}

TEST(Cli, BoundsAndBudgetAreFaults) {
  EXPECT_EQ(cli("oracle " + scenario("mult_t.scn") + " --max-candidates 2").code, 3);
  EXPECT_EQ(cli("oracle " + scenario("budget.scn") + " --time-budget 0").code, 3);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(cli("check " + scenario("bad_shape.scn")).code, 2);
  EXPECT_EQ(cli("check /nonexistent/file.scn").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, StandardInputAndOutFile) {
  Result a = cli("tower < " + scenario("a2_demo.scn"));
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, slurp(scenario("a2_demo.expected")));
  auto path = std::filesystem::temp_directory_path() / "defobs_cli_out.txt";
  Result b = cli("demo-sod " + scenario("a2_demo.scn") + " --out " + path.string());
  EXPECT_EQ(b.code, 0);
  EXPECT_TRUE(b.out.empty());
  EXPECT_EQ(slurp(path.string()), slurp(scenario("a2_demo_sod.expected")));
  std::filesystem::remove(path);
}

TEST(Cli, TowerOverF3) {
  Result r = cli("tower " + scenario("a2_demo_f3.scn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("3 0 0 0 true true"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("verdict: true"), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (std::string task : {"check", "lift", "classify", "oracle"})
    for (std::string f : {"mult_t.scn", "identity.scn", "two_classes.scn"}) {
      std::string args = task + " " + scenario(f) + " --seed 9";
      EXPECT_EQ(without_elapsed(cli(args).out), without_elapsed(cli(args).out)) << args;
    }
  EXPECT_EQ(cli("tower " + scenario("a2_demo.scn") + " --seed 4").out,
            cli("tower " + scenario("a2_demo.scn") + " --seed 4").out);
}
