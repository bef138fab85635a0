// End-to-end tests of the installed command surface: each case launches the
// real binary (path in QPROSUMER_BIN) against the canonical instance
// document (directory in QPROSUMER_DATA).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qprosumer/problem.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const char* require_env(const char* name) {
  const char* value = std::getenv(name);
  REQUIRE_MESSAGE(value != nullptr, "environment variable ", name,
                  " must point into the build");
  return value;
}

std::filesystem::path temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "qprosumer_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

// Runs `binary + args` capturing both streams and the exit status.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const auto err_path = temp_dir() / ("stderr." + std::to_string(counter++));
  const std::string command = env_prefix + std::string(require_env("QPROSUMER_BIN")) +
                              " " + args + " 2>" + err_path.string();
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.out.append(buffer, got);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.err = slurp(err_path);
  std::filesystem::remove(err_path);
  return result;
}

std::string reference_path() {
  return (std::filesystem::path(require_env("QPROSUMER_DATA")) /
          "reference_instance.json")
      .string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("transform emits the worked Ising model") {
  const auto result = run("transform " + reference_path() + " --emit ising");
  REQUIRE(result.status == 0);
  const auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["h"][0] == doctest::Approx(79.0));
  CHECK(doc["offset"] == doctest::Approx(2019.5));
  CHECK(doc["num_spins"] == 12);
  CHECK(result.err.find("12 variables, 5 constraints") != std::string::npos);
}

TEST_CASE("transform reports ILP dimensions") {
  const auto result = run("transform " + reference_path() + " --emit ilp");
  REQUIRE(result.status == 0);
  const auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["num_vars"] == 12);
  CHECK(doc["constraints"].size() == 5);
  CHECK(result.err.find("12 variables, 5 constraints") != std::string::npos);
}

TEST_CASE("transform writes files atomically via --out") {
  const auto out_path = temp_dir() / "qubo_out.json";
  std::filesystem::remove(out_path);
  const auto result = run("transform " + reference_path() +
                          " --emit qubo --out " + out_path.string());
  REQUIRE(result.status == 0);
  CHECK(result.out.empty());
  const auto doc = nlohmann::json::parse(slurp(out_path));
  CHECK(doc["offset"] == doctest::Approx(6464.0));
  CHECK(doc["linear"][0] == doctest::Approx(-2178.0));
  CHECK_FALSE(std::filesystem::exists(out_path.string() + ".tmp"));
  std::filesystem::remove(out_path);
}

TEST_CASE("instance validation failures exit 2 and name the field") {
  const auto bad_path = temp_dir() / "short_tariff.json";
  {
    std::ofstream out(bad_path);
    out << R"({"hours": 3, "e_max": 3, "tariff": [22, 21],
               "loads": [{"id": "1", "alpha": 1, "beta": 3, "delta": 2, "power": 2}]})";
  }
  const auto result = run("transform " + bad_path.string() + " --emit ising");
  CHECK(result.status == 2);
  CHECK(result.err.find("tariff") != std::string::npos);
  std::filesystem::remove(bad_path);
}

TEST_CASE("missing instance files exit 3") {
  const auto result = run("transform /nonexistent/nowhere.json --emit ising");
  CHECK(result.status == 3);
}

TEST_CASE("unknown flag values exit 2") {
  const auto result = run("transform " + reference_path() + " --emit sudoku");
  CHECK(result.status == 2);
}

TEST_CASE("exact solve prints the optimum first") {
  const auto result = run("solve " + reference_path() + " --method exact");
  REQUIRE(result.status == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[1].find("110010") != std::string::npos);
  CHECK(lines[1].find("107") != std::string::npos);
  CHECK(lines[1].find("1.07") != std::string::npos);
  CHECK(result.err.find("optimum 107 cents") != std::string::npos);
}

TEST_CASE("exact solve as csv carries all nine schedules") {
  const auto result =
      run("solve " + reference_path() + " --method exact --format csv");
  REQUIRE(result.status == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "x_1^1,x_1^2,x_1^3,x_2^1,x_2^2,x_2^3,cost_cents");
  CHECK(lines[1] == "1,1,0,0,1,0,107");
  CHECK(lines[9] == "1,0,1,0,0,1,116");
}

TEST_CASE("qaoa solve is deterministic for a fixed seed") {
  const std::string args = "solve " + reference_path() +
                           " --method qaoa --reps 1 --restarts 1 --seed 7"
                           " --shots 256 --max-evals 60 --format json";
  const auto first = run(args);
  REQUIRE(first.status == 0);
  const auto second = run(args);
  CHECK(first.out == second.out);

  const auto doc = nlohmann::json::parse(first.out);
  CHECK(doc["baseline_expectation"] == doctest::Approx(2019.5));
  int total = 0;
  for (const auto& s : doc["samples"]) total += s["count"].get<int>();
  CHECK(total == 256);
}

TEST_CASE("qaoa solve above the cap exits 4 and cites the cap") {
  const auto wide_path = temp_dir() / "five_hours.json";
  {
    std::ofstream out(wide_path);
    out << qprosumer::instance_document(qprosumer::reference_instance(5));
  }
  const auto result =
      run("solve " + wide_path.string() + " --method qaoa --cap 16");
  CHECK(result.status == 4);
  CHECK(result.err.find("cap") != std::string::npos);
  CHECK(result.err.find("20") != std::string::npos);

  const auto env_result =
      run("solve " + wide_path.string() + " --method qaoa", "QPROSUMER_CAP=16 ");
  CHECK(env_result.status == 4);

  const auto garbage =
      run("solve " + wide_path.string() + " --method qaoa", "QPROSUMER_CAP=lots ");
  CHECK(garbage.status == 2);
  std::filesystem::remove(wide_path);
}

TEST_CASE("enumerate reproduces the nine known rows") {
  const auto result = run("enumerate " + reference_path() + " --format csv");
  REQUIRE(result.status == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[1] == "1,1,0,0,1,0,107");
  CHECK(lines[4] == "0,1,1,0,1,0,111");
  CHECK(lines[9] == "1,0,1,0,0,1,116");
  CHECK(result.err.find("9 feasible schedules") != std::string::npos);

  const auto json_result = run("enumerate " + reference_path() + " --format json");
  REQUIRE(json_result.status == 0);
  const auto doc = nlohmann::json::parse(json_result.out);
  CHECK(doc["rows"].size() == 9);
}

TEST_CASE("enumerate refuses oversized instances with exit 4") {
  qprosumer::ProsumerInstance big;
  big.num_hours = 8;
  big.tariff.assign(8, 10);
  big.e_max = 4;
  for (int l = 0; l < 4; ++l)
    big.loads.push_back({std::to_string(l + 1), 1, 8, 2, 1});
  const auto big_path = temp_dir() / "oversized.json";
  {
    std::ofstream out(big_path);
    out << qprosumer::instance_document(big);
  }
  const auto result = run("enumerate " + big_path.string());
  CHECK(result.status == 4);
  std::filesystem::remove(big_path);
}

TEST_CASE("bench reports qubit counts and cap rows") {
  const auto result = run(
      "bench --hours 3,4,5 --reps 1 --shots 8 --restarts 1 --max-evals 6"
      " --cap 16 --format csv --seed 2");
  REQUIRE(result.status == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "hours,qubits,reps,seconds");
  CHECK(lines[1].rfind("3,12,1,", 0) == 0);
  CHECK(lines[2].rfind("4,16,1,", 0) == 0);
  CHECK(lines[3] == "5,20,1,cap");
  CHECK(lines[1].find("cap") == std::string::npos);
}

TEST_CASE("run manifests land on stderr or in a file") {
  const auto manifest_path = temp_dir() / "manifest.json";
  std::filesystem::remove(manifest_path);
  const auto result = run("enumerate " + reference_path() +
                          " --format json --manifest " + manifest_path.string());
  REQUIRE(result.status == 0);
  const auto manifest = nlohmann::json::parse(slurp(manifest_path));
  CHECK(manifest["command"] == "enumerate");
  CHECK(manifest["outputs"][0] == "stdout");
  CHECK(manifest.contains("timings_s"));
  std::filesystem::remove(manifest_path);

  // Without --manifest the manifest is the stderr JSON (after the summary).
  const auto on_stderr = run("enumerate " + reference_path() + " --format json");
  REQUIRE(on_stderr.status == 0);
  const auto brace = on_stderr.err.find('{');
  REQUIRE(brace != std::string::npos);
  const auto doc = nlohmann::json::parse(on_stderr.err.substr(brace));
  CHECK(doc["command"] == "enumerate");
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").status == 0);
  CHECK(run("solve --help").status == 0);
  CHECK(run("").status == 2);  // a subcommand is required
}
