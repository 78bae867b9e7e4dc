#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CRIMED_CLI_PATH
#define CRIMED_CLI_PATH "crimed"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command =
      std::string("\"") + CRIMED_CLI_PATH + "\" " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr)
    result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

double parse_value(const std::string& output, const std::string& key) {
  const std::size_t pos = output.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(output.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("help exits cleanly and documents subcommands") {
  const CommandResult result = run_cli("--help");
  CHECK(result.exit_code == 0);
  for (const char* name :
       {"run-experiment", "compute-kl", "check-concentration", "lower-bound"})
    CHECK(result.output.find(name) != std::string::npos);
}

TEST_CASE("unknown flags fail loudly") {
  CHECK(run_cli("compute-kl 0 1 0.1 --nonsense").exit_code != 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("run-experiment --preset setting1 --reps 0").exit_code == 2);
  CHECK(run_cli("run-experiment --preset setting9").exit_code == 2);
  CHECK(run_cli("run-experiment").exit_code == 2);
  CHECK(run_cli("compute-kl 0 1 0.9").exit_code == 2);
}

TEST_CASE("compute-kl prints the divergence record") {
  const CommandResult below = run_cli("compute-kl 0 0.01 0.1");
  CHECK(below.exit_code == 0);
  CHECK(parse_value(below.output, "kl") == 0.0);

  const CommandResult gaussian = run_cli("compute-kl 0 2 0");
  CHECK(parse_value(gaussian.output, "kl") == 2.0);
  CHECK(parse_value(gaussian.output, "delta_min") == 0.0);

  const CommandResult corrupted = run_cli("compute-kl 0 2 0.1");
  CHECK(parse_value(corrupted.output, "kl") ==
        doctest::Approx(0.6638300302).epsilon(1e-8));
  CHECK(parse_value(corrupted.output, "c") > 0.1 / 0.9);
  CHECK(parse_value(corrupted.output, "derivative") ==
        doctest::Approx(0.5983947903).epsilon(1e-8));
}

TEST_CASE("check-concentration emits the table and exit 0 on a tiny grid") {
  const CommandResult result = run_cli(
      "check-concentration --n 50 --y 0.3 --eps 0.2 --reps 300 --seed 5");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("n,y,eps,adversary,empirical_freq,bound") !=
        std::string::npos);
  CHECK(result.output.find("point_mass_high") != std::string::npos);
  CHECK(result.output.find("alternating") != std::string::npos);
}

TEST_CASE("lower-bound prints slopes for a preset") {
  const CommandResult result = run_cli("lower-bound --preset setting2");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("regret_coefficient=") != std::string::npos);
  CHECK(result.output.find("(optimal)") != std::string::npos);
}

TEST_CASE("run-experiment writes the documented CSV schema") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "crimed_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const CommandResult result = run_cli(
      "run-experiment --preset setting1 --reps 3 --horizon 500 --seed 3 "
      "--checkpoints 8 --policies crimed_star,imed --out " +
      dir.string());
  CHECK(result.exit_code == 0);

  std::ifstream regret(dir / "regret_crimed_star.csv", std::ios::binary);
  REQUIRE(regret.good());
  std::string header;
  std::getline(regret, header);
  CHECK(header == "checkpoint,mean_regret,p5,p95");
  // locale-independent formatting: no comma decimals, LF endings
  std::stringstream contents;
  contents << regret.rdbuf();
  CHECK(contents.str().find('\r') == std::string::npos);

  std::ifstream summary(dir / "summary.csv", std::ios::binary);
  REQUIRE(summary.good());
  std::getline(summary, header);
  CHECK(header == "policy,arm,mean_pulls,gap,lower_bound_slope");
}
