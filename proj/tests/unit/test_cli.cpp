#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("earc_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(EARC_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("fly").code, 2);
  EXPECT_EQ(run("plan --method astar").code, 2);
  EXPECT_EQ(run("plan --count notanumber").code, 2);
  EXPECT_EQ(run("build-db").code, 2);
}

TEST_F(Cli, PlanSucceedsAndWritesArtifacts) {
  const CliResult r = run("plan --method arc --count 3 --scenario-seed 4 --trace " + path("t.trace") + " --svg " +
                    path("p.svg") + " --save-scenario " + path("s.scn"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("success 1"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("t.trace")));
  EXPECT_TRUE(fs::exists(path("s.scn")));
  EXPECT_EQ(run("render --trace " + path("t.trace") + " -o " + path("r.svg")).code, 0);
  EXPECT_TRUE(fs::exists(path("r.svg")));
  EXPECT_EQ(run("plan --method earc --scenario " + path("s.scn")).code, 0);
}

TEST_F(Cli, PlannerFailureExitsOne) {
  const CliResult r = run("plan --method arc --count 16 --timeout 0.0001");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("success 0"), std::string::npos);
}

TEST_F(Cli, IoErrorsExitThree) {
  EXPECT_EQ(run("inspect-db " + path("missing.db")).code, 3);
  write("bad.db", "EARC-DB 1\nrobots 1\n");
  EXPECT_EQ(run("inspect-db " + path("bad.db")).code, 3);
  EXPECT_EQ(run("plan --scenario " + path("missing.scn")).code, 3);
}

TEST_F(Cli, BuildAndInspectDatabase) {
  ASSERT_EQ(run("build-db --counts 2:5,3:2 -o " + path("m.db")).code, 0);
  const CliResult r = run("inspect-db " + path("m.db"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("entries"), std::string::npos);
  EXPECT_EQ(run("plan --method earc --count 4 --db " + path("m.db")).code, 0);
  EXPECT_EQ(run("build-db --counts 2x5 -o " + path("x.db")).code, 2);
}

TEST_F(Cli, FullDatabaseAndLightning) {
  ASSERT_EQ(run("build-full-db --ladder 2 --entries 3 -o " + path("full")).code, 0);
  ASSERT_TRUE(fs::exists(path("full/full-2.db")));
  EXPECT_EQ(run("plan --method lightning --count 2 --db " + path("full/full-2.db")).code, 0);
  EXPECT_EQ(run("plan --method lightning --count 3 --db " + path("full/full-2.db")).code, 2);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  write("bad.toml", "[plan]\nmethod = \"astar\"\ncount = 2\n");
  EXPECT_EQ(run("--config " + path("bad.toml") + " plan").code, 2);
  EXPECT_EQ(run("--config " + path("bad.toml") + " plan --method arc").code, 0);

  write("slow.toml", "[plan]\nmethod = \"arc\"\ncount = 16\ntimeout = 0.0001\n");
  EXPECT_EQ(run("--config " + path("slow.toml") + " plan").code, 1);
  const CliResult r = run("--config " + path("slow.toml") + " plan --count 2 --timeout 30");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run("--config " + path("missing.toml") + " plan").code, 2);
}

TEST_F(Cli, BenchWritesMetrics) {
  const std::string out = path("bench");
  ASSERT_EQ(run("bench --ladder 2 --methods arc,earc --trials 2 --per-key 5 --no-timings -o " + out).code, 0);
  EXPECT_TRUE(fs::exists(out + "/trials.csv"));
  EXPECT_TRUE(fs::exists(out + "/summary.csv"));
  std::ifstream in(out + "/trials.csv");
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 1 + 2 * 2);
}
