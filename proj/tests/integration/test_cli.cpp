#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "fixtures.hpp"
#include "sosmc/model_io.hpp"
#include "sosmc/report.hpp"

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;
};

std::string tmpPath(const std::string& suffix) {
  static std::atomic<int> counter{0};
  return "/tmp/sosmc_cli_" + std::to_string(getpid()) + "_" +
         std::to_string(counter.fetch_add(1)) + suffix;
}

/// Runs the CLI with stdout captured and stderr silenced.
RunResult runCli(const std::string& args) {
  std::string outFile = tmpPath(".out");
  std::string cmd =
      std::string(SOSMC_CLI) + " " + args + " >" + outFile + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exitCode = WEXITSTATUS(status);
  std::ifstream in(outFile);
  std::ostringstream os;
  os << in.rdbuf();
  r.out = os.str();
  std::remove(outFile.c_str());
  return r;
}

std::string fixture(const std::string& name) {
  return testsupport::fixturePath(name);
}

}  // namespace

TEST_CASE("check runs the whole fire pipeline") {
  RunResult r = runCli("check --model " + fixture("fire.sosm") + " --contract " +
                       fixture("reqs.gcsl") +
                       " --time-bound 7months --mode fixed:40 --seed 42 --jobs 2");
  CHECK(r.exitCode == 1);  // at least one requirement is violated on the fixture
  CHECK(r.out.find("DistrictStationBalance") != std::string::npos);
  CHECK(r.out.find("MeanAreaUnderFire") != std::string::npos);
  CHECK(r.out.find("FireCarsAllUsed") != std::string::npos);
  CHECK(r.out.find("p-hat:") != std::string::npos);
}

TEST_CASE("translate reproduces the golden expansion") {
  RunResult r = runCli("translate --contract " + fixture("req3.gcsl") + " --model " +
                       fixture("fire.sosm") + " --time-bound 7months");
  CHECK(r.exitCode == 0);
  CHECK(r.out == sosmc::readFile(fixture("golden/req3.bltl")));
}

TEST_CASE("missing required flags exit with usage code and name the flag") {
  std::string outFile = tmpPath(".err");
  std::string cmd = std::string(SOSMC_CLI) + " translate --contract " +
                    fixture("req3.gcsl") + " --model " + fixture("fire.sosm") +
                    " >/dev/null 2>" + outFile;
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  std::ifstream in(outFile);
  std::ostringstream os;
  os << in.rdbuf();
  CHECK(os.str().find("--time-bound") != std::string::npos);
  std::remove(outFile.c_str());
}

TEST_CASE("simulate then monitor closes the loop") {
  std::string trace = tmpPath(".trace");
  std::string formula = tmpPath(".bltl");
  RunResult sim = runCli("simulate --model " + fixture("fire.sosm") +
                         " --seed 9 --horizon 7months -o " + trace);
  REQUIRE(sim.exitCode == 0);
  RunResult tr = runCli("translate --contract " + fixture("req2.gcsl") +
                        " --model " + fixture("fire.sosm") +
                        " --time-bound 7months -o " + formula);
  REQUIRE(tr.exitCode == 0);
  RunResult mon = runCli("monitor --formula " + formula + " --trace " + trace +
                         " --model " + fixture("fire.sosm"));
  CHECK((mon.exitCode == 0 || mon.exitCode == 1));
  CHECK((mon.out == "holds\n" || mon.out == "violated\n"));
  std::remove(trace.c_str());
  std::remove(formula.c_str());
}

TEST_CASE("eval inspects a trace sample") {
  std::string trace = tmpPath(".trace");
  REQUIRE(runCli("simulate --model " + fixture("fire.sosm") +
                 " --seed 4 --horizon 30 -o " + trace)
              .exitCode == 0);
  RunResult r = runCli("eval --expr \"SoS.itsDistricts.fireArea->sum() >= 0\" "
                       "--trace " + trace + " --index 0 --model " +
                       fixture("fire.sosm"));
  CHECK(r.exitCode == 0);
  CHECK(r.out == "true\n");
  std::remove(trace.c_str());
}

TEST_CASE("records format is machine parseable") {
  RunResult r = runCli("check --model " + fixture("coin.sosm") + " --contract " +
                       fixture("coin.gcsl") +
                       " --time-bound 1 --mode fixed:100 --seed 8 --format records");
  REQUIRE(r.exitCode == 0);
  // Strip the leading "contract <name>" line, the rest is a record block.
  std::string body = r.out.substr(r.out.find('\n') + 1);
  sosmc::Estimate e = sosmc::parseRecords(body);
  CHECK(e.n == 100);
  CHECK(e.runSeeds.size() == 100);
}

TEST_CASE("statistical undecided exits with its own code") {
  // The coin bias equals the declared confidence, so a chernoff run lands
  // inside the precision band.
  std::string contract = tmpPath(".gcsl");
  sosmc::writeFile(contract,
                   "behavior contract NearBias Goal: whenever [true] occurs "
                   "[coin_1.face = heads] holds Confidence: 70%\n");
  RunResult r = runCli("check --model " + fixture("coin.sosm") + " --contract " +
                       contract + " --time-bound 1 --mode chernoff:0.02,0.05 "
                       "--seed 11 --jobs 4");
  CHECK(r.exitCode == 3);
  CHECK(r.out.find("undecided") != std::string::npos);
  std::remove(contract.c_str());
}

TEST_CASE("environment seed applies when the flag is absent") {
  std::string t1 = tmpPath(".trace");
  std::string t2 = tmpPath(".trace");
  std::string base = std::string(SOSMC_CLI) + " simulate --model " +
                     fixture("fire.sosm") + " --horizon 30 -o ";
  REQUIRE(std::system(("SOSMC_SEED=77 " + base + t1 + " 2>/dev/null").c_str()) == 0);
  REQUIRE(std::system((base + t2 + " --seed 77 2>/dev/null").c_str()) == 0);
  CHECK(sosmc::readFile(t1) == sosmc::readFile(t2));
  std::remove(t1.c_str());
  std::remove(t2.c_str());
}

TEST_CASE("config file supplies flags with command line precedence") {
  std::string cfg = tmpPath(".ini");
  sosmc::writeFile(cfg, "[check]\nmodel = " + fixture("coin.sosm") +
                            "\ncontract = " + fixture("coin.gcsl") +
                            "\ntime-bound = 1\nmode = fixed:50\nseed = 3\n");
  RunResult r = runCli("--config " + cfg + " check");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("runs:      50") != std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("parse dumps the contract structure") {
  RunResult r = runCli("parse --contract " + fixture("reqs.gcsl") + " --model " +
                       fixture("fire.sosm"));
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("contract FireCarsAllUsed") != std::string::npos);
  CHECK(r.out.find("forAll fireStation in SoS.itsFireStations") != std::string::npos);
  CHECK(r.out.find("pattern whenever-within [0, 180]") != std::string::npos);
}
