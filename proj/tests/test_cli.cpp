// Drives the command line binary end to end through std::system, the same way
// a user would. Runs stay tiny (9x9 grid, one or two iterations) so the suite
// adds well under a second.

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// number of CSV rows after the header line
int data_rows(const std::string& csv) {
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  return lines - 1;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + IRGNM_CLI_PATH + "\" " + args;
  return std::system(cmd.c_str());
}

// classical method on noise free data: iteration count is set by max-iter,
// which makes it easy to tell apart config values from flag overrides
std::string base_config(const fs::path& out) {
  return "[run]\n"
         "problem=potential\n"
         "method=cirgnm\n"
         "grid=9\n"
         "n-obs=0\n"
         "max-iter=2\n"
         "seed=7\n"
         "out=" +
         out.string() + "\n";
}

}  // namespace

TEST_SUITE("cli") {

  TEST_CASE("config file drives a run") {
    fs::path dir = fresh_dir("irgnm_cli_cfg");
    fs::path cfg = dir / "run.cfg";
    fs::path out = dir / "res";
    write_file(cfg, base_config(out));

    int rc = run_cli("run --config \"" + cfg.string() + "\" > /dev/null");
    CHECK(rc == 0);

    std::string traj = slurp(out / "trajectory.csv");
    REQUIRE(!traj.empty());
    CHECK(traj.rfind("iter,phase,alpha", 0) == 0);
    CHECK(data_rows(traj) == 2);
  }

  TEST_CASE("command line flag overrides the config file") {
    fs::path dir = fresh_dir("irgnm_cli_override");
    fs::path cfg = dir / "run.cfg";
    fs::path out = dir / "res";
    write_file(cfg, base_config(out));

    int rc = run_cli("run --config \"" + cfg.string() +
                     "\" --max-iter 1 > /dev/null");
    CHECK(rc == 0);

    std::string traj = slurp(out / "trajectory.csv");
    REQUIRE(!traj.empty());
    CHECK(data_rows(traj) == 1);
  }

  TEST_CASE("unknown config key is rejected") {
    fs::path dir = fresh_dir("irgnm_cli_badkey");
    fs::path cfg = dir / "run.cfg";
    fs::path out = dir / "res";
    write_file(cfg, base_config(out) + "bogus=1\n");

    int rc = run_cli("run --config \"" + cfg.string() +
                     "\" > /dev/null 2> /dev/null");
    CHECK(rc != 0);
    // the parse fails before any solve starts, so nothing gets written
    CHECK(!fs::exists(out / "trajectory.csv"));
  }

}  // TEST_SUITE
