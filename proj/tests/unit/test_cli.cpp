#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "stillwater/io.hpp"
#include "stillwater/run.hpp"

namespace fs = std::filesystem;
using namespace stillwater;

namespace {

const fs::path kConfigs = STILLWATER_CONFIGS;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stillwater_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + STILLWATER_CLI + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

const char* kTiny = R"(
[grid]
N = 32
[nondimensional]
A = 1
G = 1
[bathymetry]
kind = half_ellipse
amplitude = 1
[forcing]
phi = gravity
nu1 = 0.6
nu2 = 0.8
)";

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("solve"), 2);
  EXPECT_EQ(run_cli("solve --config /nonexistent.ini"), 2);
  EXPECT_EQ(run_cli("--help >/dev/null"), 0);
}

TEST(Cli, BothParameterBlocksExitTwo) {
  const fs::path dir = scratch("both");
  const fs::path cfg = write_config(dir, std::string(kTiny) + "[dimensional]\nalpha = 1\ng = 1\nmu = 1\nsigma = 1\nH = 1\n");
  EXPECT_EQ(run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "out" / "state.swf1"));
}

TEST(Cli, VerifySmallConfig) {
  const fs::path dir = scratch("verify");
  EXPECT_EQ(run_cli("verify --config " + (kConfigs / "small.ini").string() + " --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "verify.json"));
}

TEST(Cli, SolveIsDeterministic) {
  const fs::path dir = scratch("solve");
  const fs::path cfg = write_config(dir, std::string(kTiny) + "[run]\nkappa = 0.1, 0.3\n");
  ASSERT_EQ(run_cli("solve --config " + cfg.string() + " --out " + (dir / "a").string() + " --jobs 2"), 0);
  ASSERT_EQ(run_cli("solve --config " + cfg.string() + " --out " + (dir / "b").string() + " --emit div_u"), 0);
  for (const char* name : {"state_0000.swf1", "state_0001.swf1"}) {
    const FieldFile a = read_field_file(dir / "a" / name);
    const FieldFile b = read_field_file(dir / "b" / name);
    for (const char* field : {"eta", "u1", "u2", "beta"}) {
      const auto x = a.get(field).samples(), y = b.get(field).samples();
      EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin())) << name << " " << field;
    }
    EXPECT_FALSE(a.has("div_u"));
    EXPECT_TRUE(b.has("div_u"));
  }
  EXPECT_TRUE(fs::exists(dir / "a" / "report.json"));
  ASSERT_EQ(run_cli("solve --config " + cfg.string() + " --out " + (dir / "c").string()), 0);
  EXPECT_EQ(slurp(dir / "a" / "state_0001.swf1"), slurp(dir / "c" / "state_0001.swf1"));
  EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "c" / "report.json"));
}

TEST(Cli, ContinueWritesBranchTable) {
  const fs::path dir = scratch("continue");
  const fs::path cfg = write_config(dir, std::string(kTiny) + "[run]\nkappa = 0.2, 0.4, 0.6\n");
  ASSERT_EQ(run_cli("continue --config " + cfg.string() + " --out " + dir.string()), 0);
  std::ifstream csv(dir / "branch.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, branch_csv_header());
  std::vector<double> kappas;
  while (std::getline(csv, line)) kappas.push_back(std::stod(line.substr(0, line.find(','))));
  EXPECT_EQ(kappas, (std::vector<double>{0, 0.2, 0.4, 0.6}));
  const FieldFile last = read_field_file(dir / "point_0003.swf1");
  EXPECT_GT(last.get("eta").max_abs(), 0.0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
}

TEST(Cli, OutEnvironmentVariable) {
  const fs::path dir = scratch("env");
  const fs::path cfg = write_config(dir, std::string(kTiny) + "[run]\nkappa = 0.1\n");
  const std::string out = (dir / "from_env").string();
  ASSERT_EQ(run_cli("solve --config " + cfg.string() + " STILLWATER_OUT=ignored"), 2);
  const std::string cmd = "STILLWATER_OUT=" + out + " \"" + STILLWATER_CLI + "\" solve --config " + cfg.string() +
                          " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "state.swf1"));
}
