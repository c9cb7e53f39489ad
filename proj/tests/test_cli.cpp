#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(BB_LAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kChampion52 = "1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RH0LA";

}  // namespace

TEST_CASE("simulate runs a machine to halt in both modes") {
  CliResult direct = run_cli("simulate --machine " + kChampion52 +
                             " --mode direct --max-steps 100000000");
  CHECK(direct.code == 0);
  CHECK(direct.out.find("kind: Halted") != std::string::npos);
  CHECK(direct.out.find("steps: 47176870") != std::string::npos);
  CHECK(direct.out.find("sigma: 4098") != std::string::npos);

  CliResult accel = run_cli("simulate --machine " + kChampion52 +
                            " --mode accel --json");
  CHECK(accel.code == 0);
  json j = json::parse(accel.out);
  CHECK(j.at("kind") == "Halted");
  CHECK(j.at("steps") == "47176870");
  CHECK(j.at("sigma") == "4098");
}

TEST_CASE("simulate resumes from a given configuration") {
  // From the all-but-last configuration, one step remains.
  CliResult r = run_cli("simulate --machine 1RB1LB_1LA1RH --mode direct "
                        "--from \"1 (B1) 1 1\" --json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("kind") == "Halted");
  CHECK(j.at("steps") == "1");
  CHECK(j.at("sigma") == "4");
}

TEST_CASE("simulate reports a budget miss as StillRunning") {
  CliResult r = run_cli("simulate --machine " + kChampion52 +
                        " --mode direct --max-steps 100 --json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("kind") == "StillRunning");
}

TEST_CASE("rules validate and run agree with the shipped analyses") {
  std::string rules = std::string(BB_LAB_DATA_DEFAULT) + "/rules/bb24_brady.json";
  CliResult v = run_cli("rules validate --rules " + rules +
                        " --range 3 --pair-range 2");
  CHECK(v.code == 0);
  CHECK(v.out.find("all rules pass") != std::string::npos);

  CliResult r = run_cli("rules run --rules " + rules + " --json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("status") == "Halted");
  CHECK(j.at("total_steps") == "7195");
  CHECK(j.at("sigma") == "90");

  // An exhausted transition budget is not success.
  CliResult lim = run_cli("rules run --rules " + rules +
                          " --max-transitions 2 --json");
  CHECK(lim.code == 1);
  CHECK(json::parse(lim.out).at("status") == "LimitReached");
}

TEST_CASE("verify-records filters by class") {
  CliResult r = run_cli("verify-records --class 2,2");
  CHECK(r.code == 0);
  CHECK(r.out.find("3 passed, 0 failed, 0 skipped") != std::string::npos);

  CliResult j = run_cli("verify-records --class 3,2 --workers 4 --json");
  CHECK(j.code == 0);
  json sum = json::parse(j.out);
  CHECK(sum.at("passed") == 8);
  CHECK(sum.at("failed") == 0);
  CHECK(sum.at("results").size() == 8);
}

TEST_CASE("decide reports non-halting machines with a witness") {
  CliResult r = run_cli("decide --machine 1RB1LB_1LA1RA --json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("nonhalting") == true);
  CHECK(j.at("reason") == "NoHaltTransition");

  CliResult halts = run_cli("decide --machine 1RB1LB_1LA1RH");
  CHECK(halts.code == 0);
  CHECK(halts.out.find("Unknown") != std::string::npos);
}

TEST_CASE("normalize produces tree-normal form") {
  // The (5,2) champion with states D and E swapped normalizes back.
  CliResult r = run_cli("normalize --machine 1RB1LC_1RC1RB_1RE0LD_1RH0LA_1LA1LE");
  CHECK(r.code == 0);
  CHECK(r.out.find(kChampion52) != std::string::npos);

  CliResult same = run_cli("normalize --machine " + kChampion52 + " --json");
  json j = json::parse(same.out);
  CHECK(j.at("machine") == kChampion52);
  CHECK(j.at("identity") == true);
}

TEST_CASE("class-size prints the closed form") {
  CliResult r = run_cli("class-size --class 2,2");
  CHECK(r.code == 0);
  CHECK(r.out.find("6561") != std::string::npos);

  CliResult j = run_cli("class-size --class 3,3 --json");
  CHECK(json::parse(j.out).at("size") == "322687697779");
}

TEST_CASE("enumerate finds the (2,2) champions") {
  CliResult r = run_cli("enumerate --class 2,2 --cutoff 100 --json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("best_s") == "6");
  CHECK(j.at("best_sigma") == "4");
  CHECK(j.at("enumerated").get<long>() > 0);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("no-such-command").code == 2);
  CHECK(run_cli("simulate").code == 2);  // --machine is required
  CHECK(run_cli("simulate --machine 1RB").code == 2);  // malformed table
  CHECK(run_cli("simulate --machine 1RB1LB_1LA1RH --mode direct "
                "--max-steps -5").code == 2);
  CHECK(run_cli("class-size --class 0,2").code == 2);
  CHECK(run_cli("rules run --rules /nonexistent.json").code == 2);
}
