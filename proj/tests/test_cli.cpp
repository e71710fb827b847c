#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "hbtdit/table.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HBTDIT_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  auto p = fs::temp_directory_path() / "hbtdit_cli_test";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("dry run echoes defaults and overrides") {
  const auto r = run("contrast --dry-run --mode slice --mass-multiplier 2 --exact-pairs");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"reduction\": \"slice\"") != std::string::npos);
  CHECK(r.out.find("\"mass_multiplier\": 2.0") != std::string::npos);
  CHECK(r.out.find("\"exact_pairs\": true") != std::string::npos);
  CHECK(r.out.find("\"n_intervals\": 10") != std::string::npos);
  CHECK(r.out.find("\"scenario\": \"contrast\"") != std::string::npos);
}

TEST_CASE("exit code 2 on invalid parameters") {
  const auto dir = scratch();
  hbtdit::write_text_file(dir / "bad.json", R"({"t_pulse_fs": 5, "t_c_fs": 10})");
  const auto r = run("hbt --config " + (dir / "bad.json").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("t_pulse_fs") != std::string::npos);
  hbtdit::write_text_file(dir / "unknown.json", R"({"colour": "red"})");
  CHECK(run("hbt --config " + (dir / "unknown.json").string()).code == 2);
  CHECK(run("hbt --mode sideways").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("decohere --intervals 2").code == 2);
  fs::remove_all(dir);
}

TEST_CASE("exit code 3 on quadrature non-convergence") {
  const auto dir = scratch();
  hbtdit::write_text_file(dir / "tight.json",
                          R"({"grid_points": 21, "quadrature": {"initial_samples": 8, "tolerance": 1e-15, "max_doublings": 1}})");
  const auto r = run("dit --out " + dir.string() + " --config " + (dir / "tight.json").string());
  CHECK(r.code == 3);
  fs::remove_all(dir);
}

TEST_CASE("exit code 4 on I/O failure") {
  const auto dir = scratch();
  CHECK(run("hbt --config " + (dir / "missing.json").string()).code == 4);
  hbtdit::write_text_file(dir / "file", "x");
  CHECK(run("decohere --out " + (dir / "file").string()).code == 4);
  fs::remove_all(dir);
}

TEST_CASE("a run writes the listed files") {
  const auto dir = scratch();
  const auto r = run("decohere --intervals 4 --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "rho12.csv"));
  CHECK(r.out.find("coherence.csv") != std::string::npos);
  fs::remove_all(dir);
}
