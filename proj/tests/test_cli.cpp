#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "builders.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path() / "panto_cli_test";
  fs::create_directories(dir);
  const fs::path log = dir / "out.log";
  const std::string cmd =
      std::string(PANTO_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return {WEXITSTATUS(status), buffer.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const fs::path kOut = fs::temp_directory_path() / "panto_cli_out";

}  // namespace

TEST_CASE("analyze: problem 1 emits the published response") {
  fs::remove_all(kOut);
  const RunResult r = run_cli("analyze " + panto::testing::fixture_path("problem1.json") +
                              " --out-dir " + (kOut / "p1").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2 active, 1 passive") != std::string::npos);

  const std::string displacements = slurp(kOut / "p1" / "displacements.csv");
  CHECK(displacements.find("5,-0.156,-0.238,0.000") != std::string::npos);
  const std::string reactions = slurp(kOut / "p1" / "reactions.csv");
  CHECK(reactions.find("6,772.4,3566.2,0.0") != std::string::npos);
  const std::string forces = slurp(kOut / "p1" / "member_forces.csv");
  CHECK(forces.find("1,cable,0.0,passive") != std::string::npos);
  CHECK(forces.find("7,bar,2793.3,-") != std::string::npos);
  CHECK(slurp(kOut / "p1" / "structure.svg").find("<svg") == 0);
}

TEST_CASE("analyze: --paper-signs negates the reported forces") {
  const RunResult r = run_cli("analyze " + panto::testing::fixture_path("problem1.json") +
                              " --paper-signs --out-dir " + (kOut / "p1s").string());
  CHECK(r.exit_code == 0);
  const std::string forces = slurp(kOut / "p1s" / "member_forces.csv");
  CHECK(forces.find("7,bar,-2793.3,-") != std::string::npos);
}

TEST_CASE("analyze: missing file is an I/O failure naming the path") {
  const RunResult r = run_cli("analyze /no/such/model.json");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("/no/such/model.json") != std::string::npos);
}

TEST_CASE("analyze: malformed and invalid documents get distinct exit codes") {
  const fs::path bad_syntax = kOut / "bad_syntax.json";
  fs::create_directories(kOut);
  std::ofstream(bad_syntax) << "{ not json";
  CHECK(run_cli("analyze " + bad_syntax.string()).exit_code == 3);

  const fs::path bad_model = kOut / "bad_model.json";
  std::ofstream(bad_model) << R"({
    "schema": "panto-model/1", "planar": true,
    "nodes": [ {"id": 1, "position": [0, 0]}, {"id": 1, "position": [1000, 0]} ],
    "sections": [ {"id": 1, "area": 28} ],
    "materials": [ {"id": 1, "elastic_modulus": 210000, "density": 7850} ],
    "members": [ {"id": 1, "kind": "bar", "nodes": [1, 1], "section": 1, "material": 1} ],
    "supports": [ {"node": 1, "fix": ["x", "y"]} ]
  })";
  CHECK(run_cli("analyze " + bad_model.string()).exit_code == 4);
}

TEST_CASE("analyze: --assume-taut reproduces the all-active benchmark deflection") {
  const RunResult r = run_cli("analyze " + panto::testing::fixture_path("problem2_uniplet.json") +
                              " --assume-taut --out-dir " + (kOut / "p2").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("assumed taut") != std::string::npos);
  CHECK(r.output.find("max displacement: 12.69") != std::string::npos);
}

TEST_CASE("validate: reports counts on success") {
  const RunResult r = run_cli("validate " + panto::testing::fixture_path("problem2_duplet.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("50 nodes") != std::string::npos);
}

TEST_CASE("geometry: generated document re-parses and analyzes") {
  const fs::path arch = kOut / "arch.json";
  const RunResult gen = run_cli("geometry --inner-radius 3 --width 0.45 --total-angle 180"
                                " --unit-angle 36 --out " + arch.string());
  CHECK(gen.exit_code == 0);
  CHECK(run_cli("validate " + arch.string()).exit_code == 0);
  CHECK(run_cli("analyze " + arch.string() + " --out-dir " + (kOut / "arch").string())
            .exit_code == 0);

  const RunResult threed = run_cli("geometry --three-d --spacing 0.5 --out " +
                                   (kOut / "arch3d.json").string());
  CHECK(threed.exit_code == 0);
  CHECK(threed.output.find("40 nodes") != std::string::npos);
  CHECK(threed.output.find("64 members") != std::string::npos);
}

TEST_CASE("geometry: a non-dividing unit angle is a configuration error") {
  const RunResult r = run_cli("geometry --unit-angle 50 --out " + (kOut / "x.json").string());
  CHECK(r.exit_code == 6);
  CHECK(r.output.find("divide") != std::string::npos);
}

TEST_CASE("optimize: repeated seed gives byte-identical history, workers ignored") {
  const std::string fixture = panto::testing::fixture_path("problem1.json");
  // A short run: override iterations via a trimmed copy of the fixture.
  const fs::path doc = kOut / "p1_short.json";
  {
    std::ifstream in(fixture);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    text.replace(text.find("\"iterations\": 100"), 17, "\"iterations\": 12");
    std::ofstream(doc) << text;
  }
  CHECK(run_cli("optimize " + doc.string() + " --seed 7 --out-dir " + (kOut / "a").string())
            .exit_code == 0);
  CHECK(run_cli("optimize " + doc.string() + " --seed 7 --workers 4 --out-dir " +
                (kOut / "b").string())
            .exit_code == 0);
  CHECK(slurp(kOut / "a" / "convergence.csv") == slurp(kOut / "b" / "convergence.csv"));
  CHECK(slurp(kOut / "a" / "convergence.svg").find("<svg") == 0);
  CHECK(slurp(kOut / "a" / "optimizer_summary.csv").find("member,") == 0);
}

TEST_CASE("optimize: configuration failures exit with the config code") {
  const fs::path doc = kOut / "p1_np1.json";
  {
    std::ifstream in(panto::testing::fixture_path("problem1.json"));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    text.replace(text.find("\"population\": 50"), 16, "\"population\": 1");
    std::ofstream(doc) << text;
  }
  CHECK(run_cli("optimize " + doc.string()).exit_code == 6);

  const fs::path no_block = kOut / "no_block.json";
  {
    std::ifstream in(panto::testing::fixture_path("problem2_duplet.json"));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::ofstream(no_block) << buffer.str();
  }
  CHECK(run_cli("optimize " + no_block.string()).exit_code == 6);
}
