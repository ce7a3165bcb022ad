#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "amd/io.hpp"
#include "support/gen.hpp"

using namespace amd;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(AMD_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("amd_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string showcase_file(const TempDir& dir,
                          const std::optional<Rational>& goal = {}) {
  SettingDocument doc;
  doc.setting = testgen::showcase_setting();
  doc.objective = Objective::social_welfare();
  doc.objective.goal = goal;
  const std::string path = dir.file("setting.json");
  write(path, serialize_setting_document(doc));
  return path;
}

}  // namespace

TEST_CASE("solve: deterministic and randomized values on stdout") {
  TempDir dir;
  const std::string setting = showcase_file(dir);

  RunResult det = run_cli("solve " + setting + " --concept ds --kind det -o " +
                          dir.file("det.json"));
  CHECK(det.exit_code == 0);
  CHECK(det.output == "5\n");

  RunResult rand = run_cli("solve " + setting +
                           " --concept ds --kind rand -o " +
                           dir.file("rand.json") + " --dump-lp " +
                           dir.file("program.lp"));
  CHECK(rand.exit_code == 0);
  CHECK(rand.output == "11/2\n");
  CHECK(fs::exists(dir.file("program.lp")));

  SUBCASE("solve output passes its own check") {
    RunResult check = run_cli("check " + setting + " " + dir.file("det.json") +
                              " --concept ds");
    CHECK(check.exit_code == 0);
    CHECK(check.output == "PASS\n");
    RunResult rcheck = run_cli("check " + setting + " " +
                               dir.file("rand.json") + " --concept ds");
    CHECK(rcheck.exit_code == 0);
  }
}

TEST_CASE("check: manipulable mechanism fails with the witness") {
  TempDir dir;
  const std::string setting = showcase_file(dir);
  MechanismDocument m;
  m.kind = MechanismDocument::Kind::deterministic;
  m.det.outcome_of = {2, 0};  // t1 -> o3 invites the misreport
  write(dir.file("bad.json"),
        serialize_mechanism_document(m, testgen::showcase_setting()));

  RunResult r = run_cli("check " + setting + " " + dir.file("bad.json") +
                        " --concept ds");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAIL") == 0);
  CHECK(r.output.find("true_type=t1") != std::string::npos);
  CHECK(r.output.find("misreport=t2") != std::string::npos);
  CHECK(r.output.find("gain=1") != std::string::npos);
}

TEST_CASE("decide: yes/no with matching exit codes") {
  TempDir dir;
  const std::string at5 = showcase_file(dir, Rational(5));
  RunResult yes = run_cli("decide " + at5 + " --concept ds --kind det -o " +
                          dir.file("w.json"));
  CHECK(yes.exit_code == 0);
  CHECK(yes.output == "yes\n");
  CHECK(fs::exists(dir.file("w.json")));

  SettingDocument doc;
  doc.setting = testgen::showcase_setting();
  doc.objective = Objective::social_welfare();
  doc.objective.goal = Rational(11, 2);
  write(dir.file("high.json"), serialize_setting_document(doc));
  RunResult no = run_cli("decide " + dir.file("high.json") +
                         " --concept ds --kind det");
  CHECK(no.exit_code == 1);
  CHECK(no.output == "no\n");
  RunResult rand_yes = run_cli("decide " + dir.file("high.json") +
                               " --concept ds --kind rand -o " +
                               dir.file("rw.json"));
  CHECK(rand_yes.exit_code == 0);
  CHECK(rand_yes.output == "yes\n");

  SUBCASE("a goal is required") {
    RunResult r = run_cli("decide " + showcase_file(dir) +
                          " --concept ds --kind det");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("goal") != std::string::npos);
  }
}

TEST_CASE("input errors exit with code 2 and name the location") {
  TempDir dir;
  std::string text = serialize_setting_document([&] {
    SettingDocument doc;
    doc.setting = testgen::showcase_setting();
    doc.objective = Objective::social_welfare();
    return doc;
  }());
  text.replace(text.find("\"1/2\","), 6, "\"1/3\",");
  write(dir.file("broken.json"), text);
  RunResult r =
      run_cli("solve " + dir.file("broken.json") + " --concept ds --kind det");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("agent1") != std::string::npos);

  RunResult missing = run_cli("solve " + dir.file("nonexistent.json") +
                              " --concept ds --kind det");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("budget exhaustion exits with code 3") {
  TempDir dir;
  write(dir.file("graph.txt"), "3 2\n1 2\n2 3\n");
  RunResult reduced = run_cli("reduce is " + dir.file("graph.txt") + " -o " +
                              dir.file("big.json") + " --meta " +
                              dir.file("meta.json"));
  REQUIRE(reduced.exit_code == 0);
  RunResult r = run_cli("solve " + dir.file("big.json") +
                        " --concept ds --kind det --budget 5");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("reduce and extract round-trip an independent set") {
  TempDir dir;
  write(dir.file("graph.txt"), "3 2\n1 2\n2 3\n");
  RunResult reduced = run_cli("reduce is " + dir.file("graph.txt") + " -o " +
                              dir.file("setting.json") + " --meta " +
                              dir.file("meta.json"));
  CHECK(reduced.exit_code == 0);
  CHECK(reduced.output == "goal 202/9\n");

  RunResult decided = run_cli("decide " + dir.file("setting.json") +
                              " --concept ds --kind det -o " +
                              dir.file("witness.json"));
  REQUIRE(decided.exit_code == 0);

  RunResult extracted = run_cli("extract " + dir.file("meta.json") + " " +
                                dir.file("witness.json"));
  CHECK(extracted.exit_code == 0);
  CHECK(extracted.output.find("vertices:") == 0);
  // Any goal-reaching mechanism encodes an independent set of size >= 2;
  // for the path that means {1, 3}.
  CHECK(extracted.output.find("1 3") != std::string::npos);
}

TEST_CASE("reduce and extract round-trip a knapsack subset") {
  TempDir dir;
  write(dir.file("items.txt"), "2 3\n1 2\n2 3\n");
  RunResult reduced = run_cli("reduce knapsack " + dir.file("items.txt") +
                              " -o " + dir.file("setting.json") + " --meta " +
                              dir.file("meta.json"));
  CHECK(reduced.exit_code == 0);
  CHECK(reduced.output == "goal 18\n");

  RunResult decided = run_cli("decide " + dir.file("setting.json") +
                              " --concept bn --kind det -o " +
                              dir.file("witness.json"));
  REQUIRE(decided.exit_code == 0);
  RunResult extracted = run_cli("extract " + dir.file("meta.json") + " " +
                                dir.file("witness.json"));
  CHECK(extracted.exit_code == 0);
  CHECK(extracted.output.find("items:") == 0);

  SUBCASE("zero-weight items are a documented rejection") {
    write(dir.file("zero.txt"), "2 3\n0 5\n1 1\n");
    RunResult r = run_cli("reduce knapsack " + dir.file("zero.txt"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("zero-weight") != std::string::npos);
  }
}

TEST_CASE("demo prints both optima and the deterministic map") {
  RunResult r = run_cli("demo");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("deterministic optimum: 5\n") != std::string::npos);
  CHECK(r.output.find("randomized optimum:    11/2\n") != std::string::npos);
  CHECK(r.output.find("t1 -> o2") != std::string::npos);
  CHECK(r.output.find("t2 -> o1") != std::string::npos);
}
