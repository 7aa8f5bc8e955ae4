#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SIMULATE_BIN
#error "SIMULATE_BIN must point at the simulate executable"
#endif

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(SIMULATE_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version and argument errors") {
  CHECK(run("--version") == 0);
  CHECK(run("definitely-not-a-subcommand") != 0);
  CHECK(run("mse-sweep --config /nonexistent/path.json") == 1);
}

TEST_CASE("config file errors surface as exit 1") {
  write_file("cli_bad.json", "{ this is not json");
  CHECK(run("mmse-curve --config cli_bad.json --out cli_bad.csv") == 1);

  write_file("cli_unknown.json",
             R"({"experiment":"mmse-curve","channel":"abs_gaussian","gamma0_grid":[1.0],"bogus":1})");
  CHECK(run("mmse-curve --config cli_unknown.json --out cli_bad.csv") == 1);

  // experiment field disagreeing with the subcommand
  write_file("cli_mismatch.json",
             R"({"experiment":"se-curve","channel":"abs_gaussian","gamma0_grid":[1.0]})");
  CHECK(run("mmse-curve --config cli_mismatch.json --out cli_bad.csv") == 1);

  std::remove("cli_bad.json");
  std::remove("cli_unknown.json");
  std::remove("cli_mismatch.json");
  std::remove("cli_bad.csv");
}

TEST_CASE("successful run writes an annotated csv") {
  write_file("cli_ok.json",
             R"({"experiment":"se-curve","channel":"abs_gaussian","gamma0_grid":[2.0,2.5]})");
  CHECK(run("se-curve --config cli_ok.json --out cli_ok.csv") == 0);
  std::string text = slurp("cli_ok.csv");
  CHECK(text.rfind("# nlspike se-curve", 0) == 0);
  CHECK(text.find("# version=") != std::string::npos);
  CHECK(text.find("# config_hash=") != std::string::npos);
  CHECK(text.find("gamma0,delta,q0,q1") != std::string::npos);
  std::remove("cli_ok.json");
  std::remove("cli_ok.csv");
}

TEST_CASE("worker count leaves the bytes unchanged; seed override does not") {
  write_file("cli_det.json",
             R"({"experiment":"mse-sweep","channel":"abs_gaussian","n":120,)"
             R"("gamma0_grid":[2.2],"seeds":[5,6],"master_seed":42})");
  CHECK(run("mse-sweep --config cli_det.json --out cli_w1.csv --workers 1") == 0);
  CHECK(run("mse-sweep --config cli_det.json --out cli_w4.csv --workers 4") == 0);
  std::string w1 = slurp("cli_w1.csv");
  CHECK(!w1.empty());
  CHECK(w1 == slurp("cli_w4.csv"));

  CHECK(run("mse-sweep --config cli_det.json --out cli_seed.csv --workers 1 --seed 43") == 0);
  CHECK(w1 != slurp("cli_seed.csv"));

  std::remove("cli_det.json");
  std::remove("cli_w1.csv");
  std::remove("cli_w4.csv");
  std::remove("cli_seed.csv");
}
