#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "foldcycle_app/run.hpp"
#include "foldcycle_app/scenario.hpp"

using namespace foldcycle;
using namespace foldcycle::app;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScenarios = FOLDCYCLE_SCENARIO_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("foldcycle_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code = 0;
  std::string err;
};

Result run_cmd(const std::string& scenario, const std::string& command, const fs::path& out,
               RunOptions extra = RunOptions{}) {
  extra.config = kScenarios / scenario;
  extra.command = command;
  extra.out = out;
  std::ostringstream err;
  const int code = run(extra, err);
  return {code, err.str()};
}

json report(const fs::path& dir, const std::string& name, const std::string& command) {
  return json::parse(slurp(dir / (name + "." + command + ".json")));
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") == std::string::npos) kept += line + "\n";
  }
  return kept;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(FOLDCYCLE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("classify reports V2") {
  TempDir t;
  const Result r = run_cmd("sys_a_2_1.json", "classify", t.path);
  CHECK(r.code == kExitOk);
  const json j = report(t.path, "sys_a_2_1", "classify");
  CHECK(j["status"] == "ok");
  CHECK(j["command"] == "classify");
  CHECK(j["payload"]["V2"].get<double>() == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("verify-lemma1") {
  TempDir t;
  RunOptions o;
  o.seed = 42;
  const Result r = run_cmd("sys_a_3_1.json", "verify-lemma1", t.path, o);
  CHECK(r.code == kExitOk);
  const json j = report(t.path, "sys_a_3_1", "verify-lemma1");
  CHECK(j["status"] == "ok");
  CHECK(j["payload"]["random_draws"]["draws"].size() == 50);
  CHECK(j["payload"]["random_draws"]["max_residual"].get<double>() < 1e-8);
}

TEST_CASE("violated monodromy condition is an input error") {
  TempDir t;
  const Result r = run_cmd("c3_violation.json", "classify", t.path);
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("C3") != std::string::npos);
  const json j = report(t.path, "c3_violation", "classify");
  CHECK(j["status"] == "error");
}

TEST_CASE("census mismatch exits with 3") {
  TempDir t;
  RunOptions o;
  o.b = 1e-6;
  const Result r = run_cmd("sys_a_2_1.json", "cycles", t.path, o);
  CHECK(r.code == kExitMismatch);
  const json j = report(t.path, "sys_a_2_1", "cycles");
  CHECK(j["status"] == "mismatch");
  CHECK(j["payload"]["cycles"].empty());

  TempDir u;
  CHECK(run_cmd("sys_a_2_1.json", "cycles", u.path).code == kExitOk);
  CHECK(report(u.path, "sys_a_2_1", "cycles")["payload"]["cycles"].size() == 2);
}

TEST_CASE("determinism") {
  for (const char* cmd : {"classify", "unfold", "cycles", "scan", "delta-dump"}) {
    const std::string scenario = std::string(cmd) == "scan" || std::string(cmd) == "delta-dump"
                                     ? "sys_a_1_1.json"
                                     : "sys_a_3_1.json";
    const std::string name = scenario.substr(0, scenario.size() - 5);
    TempDir a, b;
    REQUIRE(run_cmd(scenario, cmd, a.path).code == kExitOk);
    REQUIRE(run_cmd(scenario, cmd, b.path).code == kExitOk);
    for (const auto& entry : fs::directory_iterator(a.path)) {
      const std::string file = entry.path().filename().string();
      CAPTURE(file);
      CHECK(without_timestamp(slurp(entry.path())) == without_timestamp(slurp(b.path / file)));
    }
    CHECK(slurp(a.path / (name + "." + cmd + ".json")).find("\"timestamp\"") != std::string::npos);
  }
}

TEST_CASE("normalized scenario round-trips") {
  for (const char* scenario : {"sys_a_1_1.json", "sys_a_3_1.json", "sys_g.json"}) {
    TempDir t;
    RunOptions o;
    o.dump_normalized = true;
    REQUIRE(run_cmd(scenario, "classify", t.path, o).code == kExitOk);
    const Scenario original = load_scenario(kScenarios / scenario);
    const std::string name = original.name;
    const Scenario again = load_scenario(t.path / (name + ".scenario.json"));
    Scenario expected = original;
    expected.outputs = t.path.string();
    CHECK(again == expected);
    CHECK(normalized_json(again) == normalized_json(expected));
  }
}

TEST_CASE("portrait") {
  TempDir a;
  REQUIRE(run_cmd("sys_a_1_1.json", "portrait", a.path).code == kExitOk);
  const json pa = report(a.path, "sys_a_1_1", "portrait")["payload"];
  CHECK(pa["sliding_segments"] == 1);
  CHECK(pa["cycles"].size() == 1);
  const std::string csv = slurp(a.path / "sys_a_1_1.portrait.csv");
  CHECK(csv.rfind("polyline,kind,x,y\n", 0) == 0);
  CHECK(csv.find("cycle-upper") != std::string::npos);
  CHECK(csv.find("cycle-lower") != std::string::npos);
  const std::string svg = slurp(a.path / "sys_a_1_1.portrait.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  TempDir b;
  RunOptions o;
  o.b = 0.0;
  REQUIRE(run_cmd("sys_a_1_1.json", "portrait", b.path, o).code == kExitOk);
  const json pb = report(b.path, "sys_a_1_1", "portrait")["payload"];
  CHECK(pb["sliding_segments"] == 0);
  CHECK(pb["cycles"].empty());
  // Both folds sit at the origin: a single two-fold.
  std::istringstream in(slurp(b.path / "sys_a_1_1.portrait.csv"));
  std::string line;
  int folds = 0;
  while (std::getline(in, line)) {
    if (line.find(",fold,") == std::string::npos) continue;
    ++folds;
    CHECK(line.substr(line.find(",fold,")) == ",fold,0,0");
  }
  CHECK(folds == 2);
  CHECK(slurp(b.path / "sys_a_1_1.portrait.svg").find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  TempDir t;
  const std::string out = " --out " + t.path.string();
  const std::string s = kScenarios.string() + "/";
  CHECK(shell("classify --config " + s + "sys_a_1_1.json" + out) == 0);
  CHECK(shell("classify --config " + s + "c3_violation.json" + out) == 1);
  CHECK(shell("cycles --config " + s + "sys_a_2_1.json --b 1e-6" + out) == 3);
  CHECK(shell("bogus --config " + s + "sys_a_1_1.json" + out) == 1);
  CHECK(shell("classify --config " + t.path.string() + "/missing.json" + out) == 1);
  CHECK(shell("classify --config " + s + "sys_a_1_1.json --shift sideways" + out) == 1);
  CHECK(shell("--help") == 0);
}
