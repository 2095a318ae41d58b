#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ticklab/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "ticklab_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(TICKLAB_CLI) + " " + args + " >" + (kRoot / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
    ASSERT_EQ(run("synth --days 2 --session-length 3600 --base-lambda 1 --seed 3 --out " + (kRoot / "data").string()), 0);
  }
  static std::string data() { return (kRoot / "data" / "SYN_d000.csv").string() + " " + (kRoot / "data" / "SYN_d001.csv").string(); }
  static std::string session() { return " --session-open 09:00 --session-close 10:00 --dt 3 5 10 30 "; }
};

}  // namespace

TEST_F(Cli, SynthWritesDayFilesAndTruth) {
  EXPECT_TRUE(fs::exists(kRoot / "data" / "SYN_d001.csv"));
  EXPECT_TRUE(fs::exists(kRoot / "data" / "truth.json"));
}

TEST_F(Cli, WaitfitSucceeds) {
  EXPECT_EQ(run("waitfit " + data() + session() + "--out " + (kRoot / "w").string()), 0);
  const auto r = ticklab::io::read_json(kRoot / "w" / "report.json");
  EXPECT_EQ(r["stages"]["waitfit"], "ok");
  EXPECT_EQ(r["stages"]["moments"], "ok");
  EXPECT_TRUE(fs::exists(kRoot / "w" / "moments.csv"));
}

TEST_F(Cli, EverySubcommandRuns) {
  for (const char* sub : {"clean", "scaling", "seasonality", "ncpp-fit", "converge", "report"})
    EXPECT_EQ(run(std::string(sub) + " " + data() + session() + "--out " + (kRoot / sub).string()), 0) << sub;
  EXPECT_TRUE(fs::exists(kRoot / "ncpp-fit" / "profile_w10.json"));
  EXPECT_EQ(run("ncpp-sim --profile " + (kRoot / "ncpp-fit" / "profile_w10.json").string() +
                " --days 2 --seed 4 --out " + (kRoot / "sim").string()),
            0);
  EXPECT_TRUE(fs::exists(kRoot / "sim" / "SIM_d001.csv"));
}

TEST_F(Cli, ConfigFileReplacesFlags) {
  const auto cfg = kRoot / "run.ini";
  std::ofstream(cfg) << "session-open = 09:00\nsession-close = 10:00\nseed = 11\nout = " << (kRoot / "cfg").string()
                     << "\n";
  EXPECT_EQ(run("report --stages waitfit --config " + cfg.string() + " " + data()), 0);
  const auto r = ticklab::io::read_json(kRoot / "cfg" / "report.json");
  EXPECT_EQ(r["provenance"]["seed"], 11);
  EXPECT_EQ(r["stages"]["scaling"], "not requested");
}

TEST_F(Cli, PartialAndFatalExitCodes) {
  EXPECT_EQ(run("scaling " + data() + session() + "--dt 3 5 3000 --out " + (kRoot / "p").string()), 1);
  EXPECT_EQ(run("waitfit " + (kRoot / "missing_d0.csv").string() + " --out " + (kRoot / "f").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("report --stages nonsense " + data() + session()), 2);
}
