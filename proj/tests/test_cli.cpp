/* Copyright 2026 The condmetrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// End-to-end checks of the command-line tool: repeatable output and exit codes.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(CONDMETRICS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "condmetrics_cli_test";
    fs::remove_all(dir_);
    ASSERT_EQ(run("synth --dataset label_noise --n 50 --seed 9 --out-dir " + dir_.string()).status, 0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string inputs() {
    const auto p = [](const char* name) { return (dir_ / name).string(); };
    return "--real-features " + p("real_features.cfm") + " --gen-features " + p("gen_features.cfm") +
           " --real-labels " + p("real_labels.cfm") + " --gen-labels " + p("gen_labels.cfm") + " --probs " +
           p("probs.cfm");
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, MetricsOutputIsByteIdenticalAcrossRunsAndThreads) {
  const auto a = run("metrics " + inputs() + " --seed 4 --threads 1");
  const auto b = run("metrics " + inputs() + " --seed 4 --threads 1");
  const auto c = run("metrics " + inputs() + " --seed 4 --threads 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out.find("\"wcfid\""), std::string::npos);
}

TEST_F(CliTest, SubsampledMetricsRepeatable) {
  const std::string args = "metrics " + inputs() + " --subset-size 4 --trials 20 --seed 2 --format csv";
  const auto a = run(args + " --threads 1");
  const auto b = run(args + " --threads 3");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("run,is,bcis,wcis,fid,bcfid,wcfid,cfid_sum,accuracy,dims_used\n", 0), 0u) << a.out;
}

TEST_F(CliTest, SweepRepeatable) {
  const std::string args = "sweep --experiment label_noise " + inputs() + " --grid 0,0.5,1 --seed 1";
  const auto a = run(args + " --threads 1");
  const auto b = run(args + " --threads 2");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, OutFlagWritesSameBytes) {
  const auto path = dir_ / "report.json";
  const auto a = run("metrics " + inputs() + " --out " + path.string());
  ASSERT_EQ(a.status, 0);
  EXPECT_TRUE(a.out.empty());
  std::ifstream in(path, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, run("metrics " + inputs()).out);
}

TEST_F(CliTest, MissingFileIsInvalidInput) {
  EXPECT_EQ(run("metrics --probs " + (dir_ / "nope.cfm").string()).status, 2);
}

TEST_F(CliTest, MalformedFileIsInvalidInput) {
  const auto path = dir_ / "bad.csv";
  std::ofstream(path) << "0.5,0.5\n0.2,abc\n";
  EXPECT_EQ(run("metrics --probs " + path.string()).status, 2);
}

TEST_F(CliTest, ConfigurationErrorsExitWithFour) {
  EXPECT_EQ(run("metrics").status, 4);
  EXPECT_EQ(run("metrics --no-such-flag 1").status, 4);
  EXPECT_EQ(run("metrics --probs " + (dir_ / "probs.cfm").string() + " --pairing hungarian").status, 4);
  EXPECT_EQ(run("sweep --experiment label_noise --grid 0,2").status, 4);
}

TEST_F(CliTest, HelpSucceeds) { EXPECT_EQ(run("--help").status, 0); }

}  // namespace
