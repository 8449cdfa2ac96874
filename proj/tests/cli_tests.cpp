#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rigicert/corpus.hpp"
#include "rigicert/framework_io.hpp"

// End-to-end checks of the command-line tool; the binary path arrives
// in RIGICERT_BIN.

namespace {

using nlohmann::json;

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string scratch_dir() {
  static const std::string dir = [] {
    std::string tmpl = "/tmp/rigicert_cli_XXXXXX";
    char* made = mkdtemp(tmpl.data());
    REQUIRE(made != nullptr);
    return std::string(made);
  }();
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("RIGICERT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "RIGICERT_BIN must point at the CLI binary");
  static int counter = 0;
  const std::string out_path = scratch_dir() + "/out" + std::to_string(counter);
  const std::string err_path = scratch_dir() + "/err" + std::to_string(counter);
  ++counter;
  const std::string cmd =
      std::string(bin) + " " + args + " >" + out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = scratch_dir() + "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

std::string corpus_file(const std::string& name) {
  const auto& entry = rigicert::corpus_entry(name);
  const std::string path = scratch_dir() + "/" + name + ".json";
  rigicert::write_framework_file(
      path, rigicert::framework_to_json(entry.framework, entry.name));
  return path;
}

}  // namespace

TEST_CASE("corpus list names every canonical entry") {
  const RunResult r = run_cli("corpus list");
  CHECK(r.status == 0);
  for (const char* name :
       {"generic_triangle", "collinear_brace", "double_collinear", "hyperstatic_brace"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("corpus emission round-trips through analyze with status 0") {
  const std::string path = scratch_dir() + "/emitted.json";
  CHECK(run_cli("corpus collinear_brace -o " + path).status == 0);
  const RunResult r = run_cli("analyze " + path);
  CHECK(r.status == 0);
  CHECK(r.out.find("prestress_stable") != std::string::npos);
  CHECK(r.out.find("agreement: yes") != std::string::npos);
}

TEST_CASE("unknown corpus names get a suggestion") {
  const RunResult r = run_cli("corpus colinear_brace");
  CHECK(r.status != 0);
  CHECK(r.err.find("did you mean 'collinear_brace'") != std::string::npos);
}

TEST_CASE("analyze maps verdicts onto exit statuses") {
  CHECK(run_cli("analyze " + corpus_file("generic_triangle")).status == 0);
  CHECK(run_cli("analyze " + corpus_file("collinear_brace")).status == 0);
  CHECK(run_cli("analyze " + corpus_file("hyperstatic_brace")).status == 0);

  const RunResult two = run_cli("analyze " + corpus_file("double_collinear"));
  CHECK(two.status == 1);
  CHECK(two.out.find("transverse_inapplicable") != std::string::npos);

  const std::string hypo = write_file("hypostatic.json", R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[1,1],[0,1]],
    "edges": [[1,2],[2,3],[3,4],[1,4]]
  })");
  CHECK(run_cli("analyze " + hypo).status == 1);
}

TEST_CASE("analyze rejects 1-based violations with status 2") {
  const std::string path = write_file("zero_index.json", R"({
    "dimension": 2,
    "vertices": [[0,0],[1,0],[0,1]],
    "edges": [[0,1],[1,3],[2,3]]
  })");
  const RunResult r = run_cli("analyze " + path);
  CHECK(r.status == 2);
  CHECK(r.err.find("edges[1]") != std::string::npos);
}

TEST_CASE("analyze reports the line of malformed JSON with status 2") {
  const std::string path = write_file("broken.json", "{\n  \"dimension\": 2,\n  nope\n}\n");
  const RunResult r = run_cli("analyze " + path);
  CHECK(r.status == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("analyze --json emits a structured report consistent with its exit status") {
  const RunResult r = run_cli("analyze --json " + corpus_file("collinear_brace"));
  CHECK(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "prestress_stable");
  CHECK(j["exit_status"] == 0);
  CHECK(j["equivalence"]["pass"] == true);
}

TEST_CASE("analyze --report writes the same JSON to a file") {
  const std::string report = scratch_dir() + "/report.json";
  const RunResult r =
      run_cli("analyze --report " + report + " " + corpus_file("hyperstatic_brace"));
  CHECK(r.status == 0);
  const json j = json::parse(slurp(report));
  CHECK(j["verdict"] == "prestress_stable");
  CHECK(j["dof"]["class"] == "hyperstatic");
  CHECK(j["transverse"]["row_results"].size() == 8);
}

TEST_CASE("explicit pins in the file are honored and echoed") {
  const auto& entry = rigicert::corpus_entry("collinear_brace");
  json j = rigicert::framework_to_json(entry.framework, entry.name);
  j["pins"] = json::array({{1, 1}, {1, 2}, {3, 2}});
  const std::string path = write_file("explicit_pins.json", j.dump());
  const RunResult r = run_cli("analyze " + path);
  CHECK(r.status == 0);
  CHECK(r.out.find("[explicit]") != std::string::npos);
  CHECK(r.out.find("(3,y)") != std::string::npos);
}

TEST_CASE("check-equivalence passes on the brace") {
  const RunResult r = run_cli("check-equivalence " + corpus_file("collinear_brace"));
  CHECK(r.status == 0);
  CHECK(r.out.find("alpha") != std::string::npos);
  CHECK(r.out.find("residual") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
}

TEST_CASE("check-equivalence explains the nonsingular regime") {
  const RunResult r = run_cli("check-equivalence " + corpus_file("generic_triangle"));
  CHECK(r.status == 1);
  CHECK(r.out.find("nonsingular") != std::string::npos);
}

TEST_CASE("check-equivalence explains the nullity-2 regime") {
  const RunResult r = run_cli("check-equivalence " + corpus_file("double_collinear"));
  CHECK(r.status == 1);
  CHECK(r.out.find("nullity 2") != std::string::npos);
}

TEST_CASE("missing files and missing subcommands are input errors") {
  CHECK(run_cli("analyze /nonexistent/file.json").status == 2);
  CHECK(run_cli("").status == 2);
}
