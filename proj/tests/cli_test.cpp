// End-to-end checks of the command-line front end: exit codes, output files,
// and byte-level determinism of re-runs.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string command = std::string(FULLBODY_CLI_PATH) + " " + args +
                              " > /dev/null 2> /dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path write_config(const fs::path& dir, const std::string& extra_run_keys) {
  fs::create_directories(dir);
  const fs::path path = dir / "run.cfg";
  std::ofstream out(path);
  out << "[run]\n"
         "h = 1e-3\n"
         "t_final = 0.05\n"
         "sample_every = 10\n"
      << extra_run_keys
      << "X0 = 1 0 0.3\n"
         "V0 = 0 1 0\n"
         "Omega10 = 0 0 9\n"
         "x20 = -0.33 0 -0.1\n"
         "v20 = 0 -0.33 0\n"
         "\n"
         "[body1]\n"
         "mass = 1.5\n"
         "length = 0.25\n"
         "inertia = 0.0004 0.0238 0.0238\n"
         "\n"
         "[body2]\n"
         "mass = 3\n"
         "length = 0.5\n"
         "inertia = 0.0030 0.1905 0.1905\n";
  return path;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    work_ = fs::temp_directory_path() / "fullbody_cli_test";
    fs::remove_all(work_);
    fs::create_directories(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  fs::path work_;
};

TEST_F(CliTest, SimulateWritesTrajectoryAndSummary) {
  const fs::path cfg = write_config(work_, "");
  const fs::path out = work_ / "out";
  ASSERT_EQ(run_cli("simulate " + cfg.string() + " --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "summary.txt"));
  const std::string summary = slurp(out / "summary.txt");
  EXPECT_NE(summary.find("integrator = lgvi-relative-h"), std::string::npos);
  EXPECT_NE(summary.find("max_orth_err"), std::string::npos);
  EXPECT_NE(summary.find("wall_seconds"), std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const fs::path cfg = write_config(work_, "");
  const fs::path out_a = work_ / "a";
  const fs::path out_b = work_ / "b";
  ASSERT_EQ(run_cli("simulate " + cfg.string() + " --out " + out_a.string()), 0);
  ASSERT_EQ(run_cli("simulate " + cfg.string() + " --out " + out_b.string()), 0);
  EXPECT_EQ(slurp(out_a / "trajectory.csv"), slurp(out_b / "trajectory.csv"));
}

TEST_F(CliTest, CompareWritesBothCsvsAndAByteStableReport) {
  const fs::path cfg = write_config(work_, "");
  const fs::path out_a = work_ / "a";
  const fs::path out_b = work_ / "b";
  ASSERT_EQ(run_cli("compare " + cfg.string() + " --out " + out_a.string()), 0);
  ASSERT_EQ(run_cli("compare " + cfg.string() + " --out " + out_b.string()), 0);
  EXPECT_TRUE(fs::exists(out_a / "lgvi.csv"));
  EXPECT_TRUE(fs::exists(out_a / "rk4.csv"));
  EXPECT_EQ(slurp(out_a / "compare_report.txt"), slurp(out_b / "compare_report.txt"));
  EXPECT_NE(slurp(out_a / "compare_report.txt").find("orth_err_ratio"),
            std::string::npos);
}

TEST_F(CliTest, ConvergeWritesOrderReport) {
  const fs::path cfg = write_config(work_, "");
  const fs::path out = work_ / "out";
  ASSERT_EQ(run_cli("converge " + cfg.string() + " --steps 5e-3,2.5e-3,1.25e-3 --out " +
                    out.string()),
            0);
  const std::string report = slurp(out / "order_report.txt");
  EXPECT_NE(report.find("slope"), std::string::npos);
}

TEST_F(CliTest, IntegratorOverrideFlag) {
  const fs::path cfg = write_config(work_, "");
  const fs::path out = work_ / "out";
  ASSERT_EQ(run_cli("simulate " + cfg.string() + " --integrator rk4-inertial --out " +
                    out.string()),
            0);
  EXPECT_NE(slurp(out / "summary.txt").find("integrator = rk4-inertial"),
            std::string::npos);
}

TEST_F(CliTest, ExitCodeTwoOnConfigErrors) {
  EXPECT_EQ(run_cli("simulate " + (work_ / "missing.cfg").string()), 2);
  const fs::path bad = work_ / "bad.cfg";
  std::ofstream(bad) << "[run]\nnonsense = 1\n";
  EXPECT_EQ(run_cli("simulate " + bad.string()), 2);
  const fs::path cfg = write_config(work_, "");
  EXPECT_EQ(run_cli("simulate " + cfg.string() + " --integrator nope"), 2);
  EXPECT_EQ(run_cli("converge " + cfg.string() + " --steps 1e-3,5e-4"), 2);
}

TEST_F(CliTest, ExitCodeThreeOnSolverNonConvergence) {
  // A half-time-unit step with |Omega| = 9 asks for more than a half-turn per
  // step; the rotation increment leaves the solver's capture basin.
  const fs::path dir = work_ / "big";
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "[run]\n"
                        "h = 0.5\n"
                        "t_final = 5\n"
                        "X0 = 1 0 0.3\n"
                        "V0 = 0 1 0\n"
                        "Omega10 = 0 0 9\n"
                        "[body1]\n"
                        "mass = 1.5\n"
                        "length = 0.25\n"
                        "inertia = 0.0004 0.0238 0.0238\n"
                        "[body2]\n"
                        "mass = 3\n"
                        "length = 0.5\n"
                        "inertia = 0.0030 0.1905 0.1905\n";
  EXPECT_EQ(run_cli("simulate " + cfg.string() + " --out " +
                    (dir / "out").string()),
            3);
}

TEST_F(CliTest, ExitCodeFourOnBodyOverlap) {
  // Head-on course of two point bodies with a wide separation gate.
  const fs::path dir = work_ / "overlap";
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "[run]\n"
                        "h = 1e-3\n"
                        "t_final = 3\n"
                        "min_separation = 0.1\n"
                        "X0 = 1 0 0\n"
                        "V0 = -1.5 0 0\n"
                        "[body1]\n"
                        "mass = 1.5\n"
                        "length = 0\n"
                        "[body2]\n"
                        "mass = 3\n"
                        "length = 0\n";
  EXPECT_EQ(run_cli("simulate " + cfg.string() + " --out " +
                    (dir / "out").string()),
            4);
}

TEST_F(CliTest, ReportsAreIdenticalAcrossThreadCaps) {
  const fs::path cfg = write_config(work_, "");
  const auto compare_with_threads = [&](const char* threads, const fs::path& out) {
    const std::string cmd = std::string("FULLBODY_THREADS=") + threads + " " +
                            FULLBODY_CLI_PATH + " compare " + cfg.string() +
                            " --out " + out.string() + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  ASSERT_EQ(compare_with_threads("1", work_ / "st"), 0);
  ASSERT_EQ(compare_with_threads("4", work_ / "mt"), 0);
  EXPECT_EQ(slurp(work_ / "st" / "compare_report.txt"),
            slurp(work_ / "mt" / "compare_report.txt"));
  EXPECT_EQ(slurp(work_ / "st" / "lgvi.csv"), slurp(work_ / "mt" / "lgvi.csv"));
  EXPECT_EQ(slurp(work_ / "st" / "rk4.csv"), slurp(work_ / "mt" / "rk4.csv"));
}

}  // namespace
