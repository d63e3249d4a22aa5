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

#include "fedchaos/report.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "fedchaos/error.h"
#include "test_util.h"

namespace fedchaos {
namespace {

FederationResult FakeResult(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FederationResult r;
  for (std::size_t i = 0; i < n; ++i) {
    ParticipantOutcome o;
    o.id = i;
    o.size_fraction = unit(rng);
    o.positive_rate = unit(rng);
    o.pre = {unit(rng), unit(rng), 17};
    o.post = {unit(rng), unit(rng), 17};
    r.participants.push_back(o);
  }
  return r;
}

ExperimentTable RandomTable(Rng& rng, bool with_dp = true) {
  const FederationResult plain = FakeResult(5, rng);
  FederationResult dp = FakeResult(5, rng), chaos = FakeResult(5, rng);
  for (std::size_t i = 0; i < 5; ++i) {
    dp.participants[i].size_fraction = chaos.participants[i].size_fraction =
        plain.participants[i].size_fraction;
    dp.participants[i].positive_rate = chaos.participants[i].positive_rate =
        plain.participants[i].positive_rate;
  }
  std::map<std::string, FederationResult> results = {{"plain", plain}, {"chaos", chaos}};
  if (with_dp) results["dp"] = dp;
  return BuildTable(results);
}

TEST(BuildTableTest, ColumnOrderAndAverage) {
  Rng rng(1);
  const FederationResult plain = FakeResult(3, rng);
  const ExperimentTable t = BuildTable({{"plain", plain}});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[1].participant, "2");
  EXPECT_EQ(t.rows[1].cells[0], plain.participants[1].size_fraction);
  EXPECT_EQ(t.rows[1].cells[2], plain.participants[1].pre.accuracy);
  EXPECT_EQ(t.rows[1].cells[3], plain.participants[1].post.accuracy);
  EXPECT_EQ(t.rows[1].cells[4], plain.participants[1].pre.f1);
  EXPECT_EQ(t.rows[1].cells[5], plain.participants[1].post.f1);
  EXPECT_FALSE(t.rows[1].cells[6].has_value());  // dp not run
  EXPECT_EQ(t.avg.participant, "avg");
  EXPECT_FALSE(t.avg.cells[0].has_value());
  for (std::size_t c = 2; c < 6; ++c) {
    double sum = 0.0;
    for (const auto& row : t.rows) sum += *row.cells[c];
    EXPECT_NEAR(*t.avg.cells[c], sum / 3, 1e-12);
  }
}

TEST(BuildTableTest, SingleParticipantAverageIsThatRow) {
  Rng rng(2);
  const ExperimentTable t = BuildTable({{"plain", FakeResult(1, rng)}});
  for (std::size_t c = 2; c < kTableColumns.size(); ++c) EXPECT_EQ(t.avg.cells[c], t.rows[0].cells[c]);
}

TEST(BuildTableTest, PublishedAverageLandsInItsColumns) {
  FederationResult r;
  ParticipantOutcome o;
  o.pre.accuracy = 0.9735;
  o.post.accuracy = 0.9826;
  r.participants = {o};
  const ExperimentTable t = BuildTable({{"plain", r}});
  EXPECT_EQ(kTableColumns[2], "acc_pre_plain");
  EXPECT_EQ(kTableColumns[3], "acc_post_plain");
  EXPECT_EQ(*t.avg.cells[2], 0.9735);
  EXPECT_EQ(*t.avg.cells[3], 0.9826);
  const std::string text = RenderTable(t);
  EXPECT_NE(text.find("0.9735"), std::string::npos);
  EXPECT_NE(text.find("0.9826"), std::string::npos);
}

TEST(TableCsvTest, HeaderTokens) {
  Rng rng(3);
  const std::string csv = TableToCsv(RandomTable(rng));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "participant,size_frac,pos_rate,acc_pre_plain,acc_post_plain,f1_pre_plain,"
            "f1_post_plain,acc_pre_dp,acc_post_dp,f1_pre_dp,f1_post_dp,acc_pre_chaos,"
            "acc_post_chaos,f1_pre_chaos,f1_post_chaos");
}

TEST(TableCsvTest, ReloadIsLossless) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const ExperimentTable t = RandomTable(rng, i % 2 == 0);
    EXPECT_EQ(TableFromCsv(TableToCsv(t)), t);
    EXPECT_EQ(TableFromJson(TableToJson(t)), t);
  }
}

TEST(TableCsvTest, FileRoundTripByExtension) {
  Rng rng(5);
  const ExperimentTable t = RandomTable(rng);
  const auto dir = std::filesystem::temp_directory_path() / "fedchaos_report_test";
  std::filesystem::create_directories(dir);
  ExportTable(t, TableFormat::kCsv, dir / "t.csv");
  ExportTable(t, TableFormat::kJson, dir / "t.json");
  EXPECT_EQ(ReloadTable(dir / "t.csv"), t);
  EXPECT_EQ(ReloadTable(dir / "t.json"), t);
  std::filesystem::remove_all(dir);
}

TEST(TableCsvTest, RejectsWrongHeader) {
  EXPECT_THROW(TableFromCsv("participant,size\n1,0.2\n"), Error);
}

TEST(SummarizeSeedsTest, MeanAndSampleStd) {
  Rng rng(6);
  std::vector<ExperimentTable> tables = {RandomTable(rng), RandomTable(rng), RandomTable(rng)};
  const SeedSummary s = SummarizeSeeds(tables);
  EXPECT_EQ(s.seeds, 3u);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
      double sum = 0.0;
      for (const auto& t : tables) sum += *t.rows[r].cells[c];
      const double mean = sum / 3;
      double sq = 0.0;
      for (const auto& t : tables) sq += std::pow(*t.rows[r].cells[c] - mean, 2);
      EXPECT_NEAR(*s.mean.rows[r].cells[c], mean, 1e-12);
      EXPECT_NEAR(*s.stddev.rows[r].cells[c], std::sqrt(sq / 2), 1e-12);
    }
  }
}

TEST(SummarizeSeedsTest, SingleSeedHasZeroStd) {
  Rng rng(7);
  const SeedSummary s = SummarizeSeeds({RandomTable(rng)});
  EXPECT_EQ(*s.stddev.avg.cells[3], 0.0);
  EXPECT_NE(RenderSummary(s).find("±"), std::string::npos);
}

}  // namespace
}  // namespace fedchaos
