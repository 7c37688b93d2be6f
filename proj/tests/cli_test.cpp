// Drives the impwf binary end to end: exit codes, file output, config
// precedence and byte-identical reruns.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

const std::string kCli = IMPWF_CLI_PATH;
const std::string kTmp = IMPWF_TMP_DIR;

int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
  const std::string cmd = kCli + " " + args + " > " + stdout_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("theory writes a CSV with header and one row per (p, scheme)") {
  const std::string out = kTmp + "/theory.csv";
  REQUIRE(run("theory", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("p,scheme,rate_theory,rate_sim,outage_theory,outage_sim,mean_power_sim,seed\n", 0) == 0);
  CHECK(line_count(text) == 34);
  CHECK(text.find("0.5,conventional,0.2543") != std::string::npos);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const std::string a = kTmp + "/theory_stdout.csv";
  const std::string b = kTmp + "/theory_out.csv";
  REQUIRE(run("theory --snr-db 10 --mu-db 20", a) == 0);
  REQUIRE(run("theory --snr-db 10 --mu-db 20 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("simulate reruns are byte-identical") {
  const std::string a = kTmp + "/sim_a.csv";
  const std::string b = kTmp + "/sim_b.csv";
  REQUIRE(run("simulate --symbols 20000 --seed 5", a) == 0);
  REQUIRE(run("simulate --symbols 20000 --seed 5 --threads 2", b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find(",conservative,") != std::string::npos);
}

TEST_CASE("config errors exit with 1") {
  CHECK(run("theory --pb 0.3") == 1);
  CHECK(run("verify --pb 0.3") == 1);
  CHECK(run("theory --p-grid 0.5,0.2") == 1);
  CHECK(run("simulate --mode sideways") == 1);
  CHECK(run("theory --schemes optimal") == 1);
  CHECK(run("theory --config " + kTmp + "/does-not-exist.json") == 1);
  CHECK(run("") == 1);
}

TEST_CASE("flags override config file values") {
  const std::string cfg = kTmp + "/cfg.json";
  std::ofstream(cfg) << R"({"snr-db": 10, "mu-db": 20, "schemes": ["aggressive"]})";
  const std::string from_file = kTmp + "/from_file.csv";
  const std::string overridden = kTmp + "/overridden.csv";
  const std::string direct = kTmp + "/direct.csv";
  REQUIRE(run("theory --config " + cfg, from_file) == 0);
  REQUIRE(run("theory --config " + cfg + " --snr-db 0", overridden) == 0);
  REQUIRE(run("theory --mu-db 20 --schemes aggressive", direct) == 0);
  CHECK(line_count(slurp(from_file)) == 12);
  CHECK(slurp(from_file).find("0,aggressive,1.752") != std::string::npos);
  CHECK(slurp(overridden) == slurp(direct));
}

TEST_CASE("crossover prints one line per mu") {
  const std::string out = kTmp + "/cross.csv";
  REQUIRE(run("crossover --mu-sweep 0,10,20", out) == 0);
  const std::string text = slurp(out);
  CHECK(line_count(text) == 4);
  CHECK(text.find("0,0,0.367") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  const std::string out = kTmp + "/verify.csv";
  const int code = run("verify --symbols 100", out);
  CHECK((code == 0 || code == 2));
  CHECK(slurp(out).find("std_error") != std::string::npos);
  // One symbol per point and no floor: the zero standard error cannot cover
  // the gap to theory.
  CHECK(run("verify --symbols 1 --abs-floor 0") == 2);
  CHECK(run("verify --p-grid 0,0.5,1 --symbols 100000") == 0);
}
