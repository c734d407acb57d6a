// Drives the installed CLI binary end to end: exit codes, output shapes,
// and byte-for-byte determinism.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TREEQUENCH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

std::vector<double> csv_fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string field;
  while (std::getline(is, field, ',')) {
    try {
      out.push_back(std::stod(field));
    } catch (...) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("iterate converges to the single-winner limit") {
  const CmdResult res =
      run_cli("iterate --k 2 --p 0.5,0.3,0.2 --rules standard --tol 1e-9");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front() == "n,p1,p2,empty,z,y,diff");
  const auto last = csv_fields(rows.back());
  REQUIRE(last.size() == 7);
  CHECK(last[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(last[2] == doctest::Approx(0.0).scale(1).epsilon(1e-7));
  CHECK(last[3] == doctest::Approx(0.0).scale(1).epsilon(1e-7));
}

TEST_CASE("iterate reaches the tied mutation fixed point") {
  const CmdResult res =
      run_cli("iterate --k 2 --p 0.4,0.4,0.2 --rules mutation --q 0.75");
  CHECK(res.exit_code == 0);
  const auto last = csv_fields(lines_of(res.output).back());
  REQUIRE(last.size() == 7);
  CHECK(last[1] == doctest::Approx(0.25).epsilon(1e-7));
  CHECK(last[2] == doctest::Approx(0.25).epsilon(1e-7));
  CHECK(last[3] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("iterate rejects a distribution off the simplex") {
  CHECK(run_cli("iterate --p 0.5,0.6 --k 1").exit_code == 2);
}

TEST_CASE("iterate exits 3 when it runs out of steps") {
  CHECK(run_cli("iterate --k 2 --p 0.5,0.3,0.2 --steps 3 --tol 1e-18").exit_code == 3);
}

TEST_CASE("iterate emits json when asked") {
  const CmdResult res =
      run_cli("iterate --k 2 --p 0.5,0.3,0.2 --format json --tol 1e-6");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"stop_reason\":\"Converged\"") != std::string::npos);
}

TEST_CASE("limit classifies a two-block tie with verification") {
  const CmdResult res = run_cli("limit --k 4 --p 0.3,0.3,0.2,0.1,0.1 --verify");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"case\":\"Theorem1b(i=2)\"") != std::string::npos);
  CHECK(res.output.find("\"discrepancy\":") != std::string::npos);
}

TEST_CASE("limit reports the balanced-mutation conserved limit") {
  const CmdResult res =
      run_cli("limit --k 2 --p 0.45,0.25,0.3 --rules mutation --q 0.5");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"case\":\"Theorem2b-p1wins\"") != std::string::npos);
  CHECK(res.output.find("\"weights\":[0.20000000000000001,0,0.80000000000000004]") !=
        std::string::npos);
}

TEST_CASE("limit refuses rule sets without a closed form") {
  const CmdResult res = run_cli("limit --k 2 --p 0.4,0.3,0.3 --rules dary --d 3");
  CHECK(res.exit_code == 2);
}

TEST_CASE("simulate rejects zero samples") {
  CHECK(run_cli("simulate --k 2 --p 0.5,0.3,0.2 --height 2 --samples 0").exit_code == 2);
}

TEST_CASE("simulate reports a small tv distance against the exact law") {
  const CmdResult res = run_cli(
      "simulate --k 2 --p 0.5,0.3,0.2 --height 10 --samples 100000 --seed 7");
  CHECK(res.exit_code == 0);
  const auto pos = res.output.find("\"tv_distance\":");
  REQUIRE(pos != std::string::npos);
  const double tv = std::stod(res.output.substr(pos + 14));
  CHECK(tv <= 0.01);
}

TEST_CASE("simulate at height 0 reproduces the leaf law") {
  const CmdResult res = run_cli(
      "simulate --k 2 --p 0.5,0.3,0.2 --height 0 --samples 200000 --seed 3 "
      "--format csv");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() == 5);
  const auto s1 = csv_fields(rows[1]);
  CHECK(s1[2] == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("simulate output is identical across worker counts") {
  const std::string base =
      "simulate --k 2 --p 0.4,0.3,0.3 --height 6 --samples 20000 --seed 11";
  const CmdResult one = run_cli(base + " --workers 1");
  const CmdResult eight = run_cli(base + " --workers 8");
  CHECK(one.exit_code == 0);
  // worker count appears in the json header, so compare the counts only
  const auto pos1 = one.output.find("\"counts\"");
  const auto pos8 = eight.output.find("\"counts\"");
  REQUIRE(pos1 != std::string::npos);
  CHECK(one.output.substr(pos1) == eight.output.substr(pos8));
}

TEST_CASE("the workers environment variable overrides the flag") {
  setenv("TREEQUENCH_WORKERS", "5", 1);
  const CmdResult env = run_cli(
      "simulate --k 2 --p 0.4,0.3,0.3 --height 4 --samples 10000 --seed 2 "
      "--workers 1");
  unsetenv("TREEQUENCH_WORKERS");
  CHECK(env.exit_code == 0);
  CHECK(env.output.find("\"workers\":5") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string cmd =
      "simulate --k 2 --p 0.5,0.3,0.2 --height 5 --samples 5000 --seed 19 "
      "--workers 3";
  CHECK(run_cli(cmd).output == run_cli(cmd).output);
  const std::string phase_cmd = "phase --q-min 0.75 --grid 8 --mode both";
  CHECK(run_cli(phase_cmd).output == run_cli(phase_cmd).output);
}

TEST_CASE("phase labels a strong-mutation slice") {
  const CmdResult res = run_cli("phase --q-min 0.75 --grid 8 --mode predicted");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front() == "q,p1,p2,p3,case,limit1,limit2,limit3,boundary");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = csv_fields(rows[i]);
    if (f[1] > f[2]) CHECK(rows[i].find("Theorem2a-p1wins") != std::string::npos);
    if (f[1] < f[2]) CHECK(rows[i].find("Theorem2a-p2wins") != std::string::npos);
    if (f[1] == f[2]) CHECK(rows[i].find("Theorem2a-tie") != std::string::npos);
  }
}

TEST_CASE("phase sends every weak-mutation point to the empty state") {
  const CmdResult res = run_cli("phase --q-min 0.3 --grid 6 --mode predicted");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].find("Theorem2c,0,0,1") != std::string::npos);
}

TEST_CASE("phase both mode agrees off the tie line at q = 0.5") {
  const CmdResult res = run_cli("phase --q-min 0.5 --grid 6 --mode both");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front() ==
        "q,p1,p2,p3,case,limit1,limit2,limit3,iter1,iter2,iter3,agree,boundary");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = csv_fields(rows[i]);
    REQUIRE(f.size() == 13);
    CHECK(f[11] == 1.0);  // agree flag
  }
}

TEST_CASE("phase rejects q outside (0, 1)") {
  CHECK(run_cli("phase --q-min 0").exit_code == 2);
  CHECK(run_cli("phase --q-min 0.5 --q-max 1.0 --q-steps 2").exit_code == 2);
}

TEST_CASE("converge with the doubling target reaches one half") {
  const CmdResult res = run_cli("converge --target-n 10 --steps 10");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() == 12);
  CHECK(rows.front() == "n,z,bound");
  const auto last = csv_fields(rows.back());
  CHECK(last[0] == 10.0);
  CHECK(last[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("converge reports the exact squaring bounds") {
  const CmdResult res = run_cli("converge --z0 0.5 --steps 3");
  CHECK(res.exit_code == 0);
  const auto rows = lines_of(res.output);
  REQUIRE(rows.size() == 5);
  CHECK(csv_fields(rows[2])[2] == 0.25);
  CHECK(csv_fields(rows[3])[2] == 0.0625);
  CHECK(csv_fields(rows[4])[2] == 0.00390625);
}

TEST_CASE("converge rejects infeasible starts") {
  CHECK(run_cli("converge --z0 1.5").exit_code == 2);
  CHECK(run_cli("converge --z0 0.5 --target-n 3").exit_code == 2);
  CHECK(run_cli("converge").exit_code == 2);
}

TEST_CASE("table rules run from a json file") {
  const char* path = "cli_test_table.json";
  {
    std::ofstream f(path);
    f << "{\"k\": 2, \"entries\": [[1,3,1],[3,2,2],[1,2,3]]}";
  }
  const CmdResult res = run_cli(std::string("iterate --k 2 --p 0.4,0.3,0.3 ") +
                                "--rules table --table-file " + path +
                                " --steps 50 --tol 1e-9");
  std::remove(path);
  CHECK((res.exit_code == 0 || res.exit_code == 3));
  CHECK(lines_of(res.output).size() >= 2);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const char* path = "cli_test_out.csv";
  const CmdResult direct = run_cli("converge --z0 0.5 --steps 4");
  const CmdResult filed =
      run_cli(std::string("converge --z0 0.5 --steps 4 --out ") + path);
  CHECK(filed.output.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::remove(path);
  CHECK(buf.str() == direct.output);
}

}  // TEST_SUITE
