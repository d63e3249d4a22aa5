// Copyright 2026 The fedchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedchaos/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "fedchaos/error.h"
#include "fedchaos/report.h"
#include "test_util.h"

namespace fedchaos {
namespace {

namespace fs = std::filesystem;

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fedchaos_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path WriteConfig(const std::string& extra, int rounds = 2) {
    const fs::path path = dir_ / "run.ini";
    std::ofstream out(path);
    out << "[data]\npath = " << testing::BreastCancerCsv().string()
        << "\nlabel_column = diagnosis\n"
        << "[federation]\nrounds_max = " << rounds << "\nlocal_epochs = 1\n" << extra;
    return path;
  }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CommandsTest, PartitionWritesManifests) {
  CommandOptions o{WriteConfig("[run]\nseeds = 3,4\n"), std::nullopt, std::nullopt, dir_ / "out"};
  std::ostringstream out;
  CmdPartition(o, out);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest_seed3.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest_seed4.txt"));
  EXPECT_NE(out.str().find("pos (%)"), std::string::npos);
}

TEST_F(CommandsTest, ZeroRoundsLeavesPostEqualToPre) {
  CommandOptions o{WriteConfig("[privacy]\nmodes = plain\n", 0), 7, std::nullopt, dir_ / "out"};
  std::ostringstream out;
  CmdRun(o, out);
  const ExperimentTable t = ReloadTable(dir_ / "out" / "table_seed7.csv");
  for (const auto& row : t.rows) {
    EXPECT_EQ(row.cells[2], row.cells[3]);
    EXPECT_EQ(row.cells[4], row.cells[5]);
  }
}

TEST_F(CommandsTest, RunIsByteDeterministic) {
  const fs::path config = WriteConfig("[privacy]\nmodes = plain,dp,chaos\n");
  std::ostringstream sink;
  CmdRun({config, 5, std::nullopt, dir_ / "a"}, sink);
  CmdRun({config, 5, std::nullopt, dir_ / "b"}, sink);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(Slurp(e.path()), Slurp(dir_ / "b" / e.path().filename())) << e.path();
  }
  EXPECT_EQ(files, 6u);  // table csv+json, run json, manifest, summary mean+std
  const std::string run = Slurp(dir_ / "a" / "run_seed5.json");
  EXPECT_NE(run.find("\"epsilon\""), std::string::npos);
  EXPECT_NE(run.find("conservative"), std::string::npos);
}

TEST_F(CommandsTest, ModeFilterLeavesOtherColumnsEmpty) {
  CommandOptions o{WriteConfig(""), 2, std::string("dp"), dir_ / "out"};
  std::ostringstream out;
  CmdRun(o, out);
  const ExperimentTable t = ReloadTable(dir_ / "out" / "table_seed2.csv");
  EXPECT_FALSE(t.avg.cells[3].has_value());
  EXPECT_TRUE(t.avg.cells[7].has_value());
  EXPECT_FALSE(t.avg.cells[11].has_value());
}

TEST_F(CommandsTest, ReportSummarizesSeeds) {
  CommandOptions o{WriteConfig("[privacy]\nmodes = plain\n[run]\nseeds = 1,2\n"), std::nullopt,
                   std::nullopt, dir_ / "out"};
  std::ostringstream sink, report;
  CmdRun(o, sink);
  CmdReport(dir_ / "out", report);
  EXPECT_NE(report.str().find("over 2 seed"), std::string::npos);
  EXPECT_THROW(CmdReport(dir_ / "nothing", report), Error);
}

TEST_F(CommandsTest, ThreadCapFromEnvironment) {
  const fs::path config = WriteConfig("threads = 8\n");
  setenv("FEDCHAOS_THREADS", "2", 1);
  EXPECT_EQ(ResolveConfig({config, std::nullopt, std::nullopt, std::nullopt}).threads, 2u);
  setenv("FEDCHAOS_THREADS", "zero", 1);
  EXPECT_THROW(ResolveConfig({config, std::nullopt, std::nullopt, std::nullopt}), Error);
  unsetenv("FEDCHAOS_THREADS");
  EXPECT_EQ(ResolveConfig({config, std::nullopt, std::nullopt, std::nullopt}).threads, 8u);
}

}  // namespace
}  // namespace fedchaos
