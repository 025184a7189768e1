#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SCENOPT_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generate twice from one seed produces identical files") {
  TempDir a("scenopt_cli_a"), b("scenopt_cli_b");
  for (const auto& dir : {a.path, b.path})
    REQUIRE(run_cli("--workdir " + dir.string() +
                    " generate --kind mclsp --items 2 --horizon 3 --n 3 "
                    "--seed 5") == 0);
  for (int i = 0; i < 3; ++i) {
    const std::string name = "000" + std::to_string(i) + ".json";
    CHECK(slurp(a.path / "instances" / name) ==
          slurp(b.path / "instances" / name));
  }
  CHECK(slurp(a.path / "MANIFEST.json") == slurp(b.path / "MANIFEST.json"));
}

TEST_CASE("evaluate without a model checkpoint is a validation error") {
  TempDir dir("scenopt_cli_nomodel");
  REQUIRE(run_cli("--workdir " + dir.path.string() +
                  " generate --kind mclsp --items 2 --horizon 3 --n 1") == 0);
  CHECK(run_cli("--workdir " + dir.path.string() + " evaluate") == 2);
}

TEST_CASE("unknown config keys are rejected") {
  TempDir dir("scenopt_cli_badcfg");
  {
    std::ofstream out(dir.path / "cfg.json");
    out << "{\"no_such_key\": 1}\n";
  }
  CHECK(run_cli("--workdir " + dir.path.string() + " --config " +
                (dir.path / "cfg.json").string() +
                " generate --kind mclsp --n 1") == 2);
}

TEST_CASE("config file fills in unset flags, flags win") {
  TempDir dir("scenopt_cli_cfg");
  {
    std::ofstream out(dir.path / "cfg.json");
    out << "{\"items\": 2, \"horizon\": 3, \"n\": 2, \"seed\": 9}\n";
  }
  REQUIRE(run_cli("--workdir " + dir.path.string() + " --config " +
                  (dir.path / "cfg.json").string() +
                  " generate --kind mclsp --n 1") == 0);
  // the flag --n 1 overrides the file's n=2
  CHECK(fs::exists(dir.path / "instances" / "0000.json"));
  CHECK(!fs::exists(dir.path / "instances" / "0001.json"));
  const std::string archived = slurp(dir.path / "config.generate.json");
  CHECK(archived.find("\"n\": 1") != std::string::npos);
  CHECK(archived.find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("SCENOPT_SEED has the lowest precedence") {
  TempDir a("scenopt_cli_env1"), b("scenopt_cli_env2");
  const std::string base = " generate --kind mclsp --items 2 --horizon 3 --n 1";
  REQUIRE(std::system(("SCENOPT_SEED=33 " + std::string(SCENOPT_CLI_PATH) +
                       " --workdir " + a.path.string() + base +
                       " > /dev/null 2>&1")
                          .c_str()) == 0);
  REQUIRE(run_cli("--workdir " + b.path.string() + base + " --seed 33") == 0);
  CHECK(slurp(a.path / "instances" / "0000.json") ==
        slurp(b.path / "instances" / "0000.json"));
}

TEST_CASE("report reproduces a hand-computed median over three rows") {
  TempDir dir("scenopt_cli_report");
  {
    std::ofstream out(dir.path / "metrics.csv");
    out << "id,accuracy,accuracy_fixed,gap,infeas_before_repair,"
           "repair_actions,fixed_count,status,time_ref_s,time_pipe_s,"
           "time_factor\n";
    out << "a,0.9,1,0.01,0,0,4,optimal,1,0.5,2\n";
    out << "b,0.5,1,0.05,0,0,4,optimal,1,0.125,8\n";
    out << "c,0.7,1,0.02,0,0,4,optimal,1,0.25,4\n";
  }
  REQUIRE(run_cli("--workdir " + dir.path.string() + " report") == 0);
  const std::string summary = slurp(dir.path / "summary.json");
  CHECK(summary.find("\"accuracy\":{\"median\":0.69999999999999996") !=
        std::string::npos);
  CHECK(summary.find("\"gap\":{\"median\":0.02") != std::string::npos);
  CHECK(summary.find("\"time_factor\":{\"median\":4") != std::string::npos);
}

TEST_CASE("missing instance directory names the path") {
  TempDir dir("scenopt_cli_missing");
  CHECK(run_cli("--workdir " + dir.path.string() + " solve") == 2);
}
