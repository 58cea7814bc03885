#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kData = LDPLAB_DATA_DIR;

int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " \"" LDPLAB_CLI "\" " + args + " >/dev/null 2>\"" +
                          (fs::temp_directory_path() / "ldplab_cli_stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string last_stderr() { return slurp(fs::temp_directory_path() / "ldplab_cli_stderr.txt"); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldplab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = {}) const { return "--out \"" + (dir_ / sub).string() + "\""; }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, MissingMeasureFileIsAnIoError) {
  EXPECT_EQ(run("rate --measure /nonexistent.json --grid 0:1:0.5 " + out()), 1);
  const auto err = nlohmann::json::parse(last_stderr());
  EXPECT_EQ(err["error"]["kind"], "IoError");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("suite " + out()), 1);
  EXPECT_EQ(nlohmann::json::parse(last_stderr())["error"]["kind"], "BadParameters");
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(nlohmann::json::parse(last_stderr())["error"]["kind"], "UsageError");
  EXPECT_EQ(run("rate --measure x.json --grid 1:0:0.5 " + out()), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, SimulateIdentityGivesZeros) {
  ASSERT_EQ(run("simulate --measure \"" + (kData / "identity.json").string() + "\" --n 5 --samples 20 " + out()), 0);
  const auto csv = slurp(dir_ / "samples.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "sample,kappa_1,kappa_2,kappa_3,lambda_1,lambda_2,lambda_3");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',')), ",0.0,0.0,0.0,0.0,0.0,0.0");
  }
  EXPECT_EQ(rows, 20);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "simulate.json"));
  EXPECT_EQ(doc["lyapunovEstimate"][0], 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
}

TEST_F(Cli, RateReportsAreReproducible) {
  const std::string args =
      "rate --measure \"" + (kData / "diagonal_pair.json").string() + "\" --n 12 --grid 3:3.5:0.025 --seed 3 ";
  ASSERT_EQ(run(args + out("a")), 0);
  ASSERT_EQ(run(args + out("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "rate.csv"), slurp(dir_ / "b" / "rate.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "rate.json"), slurp(dir_ / "b" / "rate.json"));
  const auto doc = nlohmann::json::parse(slurp(dir_ / "a" / "rate.json"));
  EXPECT_EQ(doc["rate"]["method"], "exact");
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_TRUE(manifest.contains("wallClockSeconds"));
  EXPECT_EQ(manifest["files"].size(), 2u);
}

TEST_F(Cli, OutputDirectoryOverride) {
  const auto target = dir_ / "from_env";
  ASSERT_EQ(run("jsr --measure \"" + (kData / "boundary_k1.json").string() + "\" --depth 4 " + out("ignored"),
                "LDPLAB_OUT=\"" + target.string() + "\""),
            0);
  EXPECT_TRUE(fs::exists(target / "jsr.json"));
  EXPECT_TRUE(fs::exists(target / "jsr.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "ignored"));
}

TEST_F(Cli, CertifyAndSpectrum) {
  const auto pair = (kData / "schottky_pair.json").string();
  ASSERT_EQ(run("certify --measure \"" + pair + "\" --r 0.1 --eps 0.05 --samples 500 " + out()), 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "certify.json"));
  EXPECT_TRUE(doc["schottky"]["verdict"].get<bool>());
  ASSERT_EQ(run("spectrum --measure \"" + pair + "\" --nmax 5 " + out()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "spectrum.csv"));
}

TEST_F(Cli, ExampleBoundary) {
  ASSERT_EQ(run("example-boundary --K 1 --n 8 --nmax 4 " + out()), 0);
  for (const char* f : {"measure.json", "rate.csv", "spectrum.csv", "example_boundary.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
  const auto doc = nlohmann::json::parse(slurp(dir_ / "example_boundary.json"));
  EXPECT_DOUBLE_EQ(doc["rightEndpoint"].get<double>(), 3.0);
  EXPECT_TRUE(doc["interiorPoint"]["belowCap"].get<bool>());
}
