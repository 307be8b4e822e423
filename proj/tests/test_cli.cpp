#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef AOICAP_CLI_PATH
#error "AOICAP_CLI_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                               "/aoicap_cli_out_" + std::to_string(::getpid()) + ".txt";
  const std::string cmd =
      std::string(AOICAP_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/" + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("every subcommand supports --help with exit 0") {
  CHECK(run_cli("--help").exit_code == 0);
  for (const char* sub : {"solve", "simulate", "sweep", "region", "cdf"}) {
    CHECK(run_cli(std::string(sub) + " --help").exit_code == 0);
  }
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("solve --no-such-flag").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // missing subcommand
}

TEST_CASE("solve: happy path JSON on stdout, infeasible exits 2") {
  const RunResult ok = run_cli("solve --scenario ex1 --n 10 --m 1 --lambda 0.9");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("\"objective\"") != std::string::npos);
  CHECK(ok.out.find("\"converged\": true") != std::string::npos);

  const RunResult infeasible = run_cli("solve --scenario ex1 --n 2 --m 1 --p 1,1 --q 0.9,0.9");
  CHECK(infeasible.exit_code == 2);

  const RunResult inadmissible = run_cli("solve --scenario ex4 --f 1 --g 1");
  CHECK(inadmissible.exit_code == 2);
}

TEST_CASE("region: inner/outer checks from files") {
  const std::string point = write_temp("point.json", R"({
    "mu": [0.25, 0.5],
    "sigma2": [0.03125, 0.125],
    "network": {"n_devices": 2, "n_slots_per_round": 1, "success_probs": [0.5, 1.0]}
  })");
  const std::string pairs = write_temp("pairs.json", R"({"m": [0.2, 0.4], "h": [10, 10]})");

  const RunResult inner = run_cli("region --point " + point + " --pairs " + pairs + " --bound inner");
  CHECK(inner.exit_code == 0);
  CHECK(inner.out.find("\"feasible\": true") != std::string::npos);

  const RunResult outer = run_cli("region --point " + point + " --pairs " + pairs + " --bound outer");
  CHECK(outer.exit_code == 0);
  CHECK(outer.out.find("\"feasible\": true") != std::string::npos);

  const std::string tight = write_temp("pairs_tight.json", R"({"m": [0.3, 0.4], "h": [10, 10]})");
  const RunResult report = run_cli("region --point " + point + " --pairs " + tight + " --bound inner");
  CHECK(report.exit_code == 0);  // infeasibility is a report, not an error
  CHECK(report.out.find("\"feasible\": false") != std::string::npos);
  CHECK(report.out.find("throughput_floor[0]") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
  const std::string args =
      "simulate --scenario ex1 --n 3 --m 1 --policy maxweight --horizon 20000 --traces 3 "
      "--seed 9 --format csv";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK_FALSE(a.out.empty());
  CHECK(a.out == b.out);

  const std::string sargs = "solve --scenario ex2 --n 6 --m 1 --lambda 1.1";
  const RunResult c = run_cli(sargs);
  const RunResult d = run_cli(sargs);
  CHECK(c.exit_code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("simulate accepts solver output as a targets file") {
  const std::string targets = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                              "/targets.json";
  const RunResult solved =
      run_cli("solve --scenario ex1 --n 3 --m 1 --out " + targets);
  REQUIRE(solved.exit_code == 0);
  const RunResult sim = run_cli(
      "simulate --scenario ex1 --n 3 --m 1 --policy vwd --targets " + targets +
      " --horizon 10000 --traces 2 --format csv");
  CHECK(sim.exit_code == 0);
  CHECK(sim.out.find("device,mean_throughput") == 0);
  std::remove(targets.c_str());
}

TEST_CASE("sweep and cdf emit their tables") {
  const RunResult sweep = run_cli(
      "sweep --family prop_fair --n 3 --grid 1,3 --horizon 5000 --traces 2 --format csv");
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.out.find("sweep_var,policy,objective_mean,objective_se,error") == 0);
  CHECK(sweep.out.find("theoretical") != std::string::npos);
  CHECK(sweep.out.find("random") != std::string::npos);

  const RunResult cdf = run_cli(
      "cdf --scenario ex1 --n 3 --m 1 --horizon 50000 --traces 2 --xmax 50 --format csv");
  CHECK(cdf.exit_code == 0);
  CHECK(cdf.out.find("k,empirical_cdf,model_cdf") == 0);
}
