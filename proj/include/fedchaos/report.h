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

#ifndef FEDCHAOS_REPORT_H_
#define FEDCHAOS_REPORT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedchaos/federation.h"

namespace fedchaos {

// Metric columns in table order, after the participant label.
inline constexpr std::array<std::string_view, 14> kTableColumns = {
    "size_frac",    "pos_rate",      "acc_pre_plain", "acc_post_plain", "f1_pre_plain",
    "f1_post_plain", "acc_pre_dp",   "acc_post_dp",   "f1_pre_dp",      "f1_post_dp",
    "acc_pre_chaos", "acc_post_chaos", "f1_pre_chaos", "f1_post_chaos"};

inline constexpr std::array<std::string_view, 3> kModeOrder = {"plain", "dp", "chaos"};

struct TableRow {
  std::string participant;  // "1".."n", or "avg"
  std::array<std::optional<double>, kTableColumns.size()> cells;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

// One row per participant plus the column-mean row. A mode that was not run
// leaves its cells empty.
struct ExperimentTable {
  std::vector<TableRow> rows;
  TableRow avg;

  friend bool operator==(const ExperimentTable&, const ExperimentTable&) = default;
};

// Results keyed by mode name ("plain", "dp", "chaos"); all must describe the
// same participants.
ExperimentTable BuildTable(const std::map<std::string, FederationResult>& results);

// Mean of each present cell per column; size and positive-rate cells of the
// avg row stay empty.
TableRow AverageRow(const std::vector<TableRow>& rows);

enum class TableFormat { kCsv, kJson };

std::string TableToCsv(const ExperimentTable& table);
std::string TableToJson(const ExperimentTable& table);
ExperimentTable TableFromCsv(const std::string& text);
ExperimentTable TableFromJson(const std::string& text);

void ExportTable(const ExperimentTable& table, TableFormat format,
                 const std::filesystem::path& path);
ExperimentTable ReloadTable(const std::filesystem::path& path);

// Fixed 4-decimal rendering, the layout of the published tables.
std::string RenderTable(const ExperimentTable& table);

struct SeedSummary {
  ExperimentTable mean;
  ExperimentTable stddev;  // sample standard deviation; 0 with one seed
  std::size_t seeds = 0;
};

// Cell-wise statistics across per-seed tables of identical shape.
SeedSummary SummarizeSeeds(const std::vector<ExperimentTable>& tables);
std::string RenderSummary(const SeedSummary& summary);

}  // namespace fedchaos

#endif  // FEDCHAOS_REPORT_H_
