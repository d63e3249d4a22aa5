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

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

using json = nlohmann::json;

constexpr std::size_t kModeColumnsStart = 2;

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::optional<double> ParseCell(const std::string& cell, std::size_t line) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    Fail(ErrorCode::kFormat, "table line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return v;
}

std::string CsvHeader() {
  std::string h = "participant";
  for (auto c : kTableColumns) h += "," + std::string(c);
  return h;
}

void AppendCsvRow(std::string& out, const TableRow& row) {
  out += row.participant;
  for (const auto& cell : row.cells) {
    out += ',';
    if (cell) out += FormatDouble(*cell);
  }
  out += '\n';
}

json RowToJson(const TableRow& row) {
  json j;
  j["participant"] = row.participant;
  for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
    const std::string key(kTableColumns[c]);
    j[key] = row.cells[c] ? json(*row.cells[c]) : json(nullptr);
  }
  return j;
}

TableRow RowFromJson(const json& j) {
  TableRow row;
  row.participant = j.at("participant").get<std::string>();
  for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
    const auto& v = j.at(std::string(kTableColumns[c]));
    if (!v.is_null()) row.cells[c] = v.get<double>();
  }
  return row;
}

std::string FixedCell(const std::optional<double>& v, bool percent) {
  if (!v) return "-";
  std::ostringstream s;
  if (percent) {
    s << std::fixed << std::setprecision(0) << *v * 100.0 << "%";
  } else {
    s << std::fixed << std::setprecision(4) << *v;
  }
  return s.str();
}

std::string RenderRows(const std::vector<TableRow>& rows, const TableRow& avg,
                       const std::vector<TableRow>* spread) {
  std::ostringstream out;
  const int width = spread ? 17 : 9;
  out << std::left << std::setw(12) << "participant";
  for (auto c : kTableColumns) out << ' ' << std::setw(width) << c;
  out << '\n';
  auto emit = [&](const TableRow& row, const TableRow* sd) {
    out << std::setw(12) << row.participant;
    for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
      std::string cell = FixedCell(row.cells[c], c < kModeColumnsStart);
      if (sd && row.cells[c] && sd->cells[c] && c >= kModeColumnsStart) {
        cell += " ±" + FixedCell(sd->cells[c], false);
      }
      out << ' ' << std::setw(width) << cell;
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < rows.size(); ++i) emit(rows[i], spread ? &(*spread)[i] : nullptr);
  emit(avg, spread ? &spread->back() : nullptr);
  return out.str();
}

}  // namespace

TableRow AverageRow(const std::vector<TableRow>& rows) {
  TableRow avg;
  avg.participant = "avg";
  for (std::size_t c = kModeColumnsStart; c < kTableColumns.size(); ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rows) {
      if (row.cells[c]) {
        sum += *row.cells[c];
        ++n;
      }
    }
    if (n > 0) avg.cells[c] = sum / static_cast<double>(n);
  }
  return avg;
}

ExperimentTable BuildTable(const std::map<std::string, FederationResult>& results) {
  if (results.empty()) Fail(ErrorCode::kConfiguration, "no results to tabulate");
  const auto& first = results.begin()->second.participants;
  ExperimentTable table;
  for (std::size_t i = 0; i < first.size(); ++i) {
    TableRow row;
    row.participant = std::to_string(first[i].id + 1);
    row.cells[0] = first[i].size_fraction;
    row.cells[1] = first[i].positive_rate;
    table.rows.push_back(std::move(row));
  }
  for (const auto& [mode, result] : results) {
    std::size_t m = 0;
    while (m < kModeOrder.size() && kModeOrder[m] != mode) ++m;
    if (m == kModeOrder.size()) Fail(ErrorCode::kConfiguration, "unknown mode '" + mode + "'");
    if (result.participants.size() != first.size()) {
      Fail(ErrorCode::kDimension, "results disagree on participant count");
    }
    const std::size_t base = kModeColumnsStart + 4 * m;
    for (std::size_t i = 0; i < first.size(); ++i) {
      const auto& o = result.participants[i];
      if (o.id != first[i].id) Fail(ErrorCode::kConsistency, "results disagree on participant order");
      auto& cells = table.rows[i].cells;
      cells[base + 0] = o.pre.accuracy;
      cells[base + 1] = o.post.accuracy;
      cells[base + 2] = o.pre.f1;
      cells[base + 3] = o.post.f1;
    }
  }
  table.avg = AverageRow(table.rows);
  return table;
}

std::string TableToCsv(const ExperimentTable& table) {
  std::string out = CsvHeader() + "\n";
  for (const auto& row : table.rows) AppendCsvRow(out, row);
  AppendCsvRow(out, table.avg);
  return out;
}

ExperimentTable TableFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != CsvHeader()) {
    Fail(ErrorCode::kFormat, "table header does not match the expected columns");
  }
  std::vector<TableRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != kTableColumns.size() + 1) {
      Fail(ErrorCode::kFormat, "table line " + std::to_string(line_no) + " has " +
                                   std::to_string(fields.size()) + " fields");
    }
    TableRow row;
    row.participant = fields[0];
    for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
      row.cells[c] = ParseCell(fields[c + 1], line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.back().participant != "avg") {
    Fail(ErrorCode::kFormat, "table has no trailing avg row");
  }
  ExperimentTable table;
  table.avg = rows.back();
  rows.pop_back();
  table.rows = std::move(rows);
  return table;
}

std::string TableToJson(const ExperimentTable& table) {
  json j;
  j["rows"] = json::array();
  for (const auto& row : table.rows) j["rows"].push_back(RowToJson(row));
  j["avg"] = RowToJson(table.avg);
  return j.dump(2) + "\n";
}

ExperimentTable TableFromJson(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentTable table;
    for (const auto& row : j.at("rows")) table.rows.push_back(RowFromJson(row));
    table.avg = RowFromJson(j.at("avg"));
    return table;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("table json: ") + e.what());
  }
}

void ExportTable(const ExperimentTable& table, TableFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << (format == TableFormat::kCsv ? TableToCsv(table) : TableToJson(table));
  if (!out) Fail(ErrorCode::kIo, "failed writing " + path.string());
}

ExperimentTable ReloadTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return path.extension() == ".json" ? TableFromJson(buf.str()) : TableFromCsv(buf.str());
}

std::string RenderTable(const ExperimentTable& table) {
  return RenderRows(table.rows, table.avg, nullptr);
}

SeedSummary SummarizeSeeds(const std::vector<ExperimentTable>& tables) {
  if (tables.empty()) Fail(ErrorCode::kConfiguration, "no tables to summarize");
  const std::size_t n_rows = tables.front().rows.size();
  for (const auto& t : tables) {
    if (t.rows.size() != n_rows) Fail(ErrorCode::kDimension, "tables disagree on participant count");
  }
  SeedSummary s;
  s.seeds = tables.size();
  auto stats = [&](auto get) {
    std::pair<std::optional<double>, std::optional<double>> out;
    std::vector<double> values;
    for (const auto& t : tables) {
      if (const auto& v = get(t)) values.push_back(*v);
    }
    if (values.empty()) return out;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.first = mean;
    out.second = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    return out;
  };
  auto summarize_row = [&](auto row_of, TableRow& mean_row, TableRow& sd_row) {
    for (std::size_t c = 0; c < kTableColumns.size(); ++c) {
      auto [m, sd] = stats([&](const ExperimentTable& t) { return row_of(t).cells[c]; });
      mean_row.cells[c] = m;
      sd_row.cells[c] = sd;
    }
  };
  for (std::size_t r = 0; r < n_rows; ++r) {
    TableRow mean_row, sd_row;
    mean_row.participant = sd_row.participant = tables.front().rows[r].participant;
    summarize_row([&](const ExperimentTable& t) -> const TableRow& { return t.rows[r]; }, mean_row,
                  sd_row);
    s.mean.rows.push_back(std::move(mean_row));
    s.stddev.rows.push_back(std::move(sd_row));
  }
  s.mean.avg.participant = s.stddev.avg.participant = "avg";
  summarize_row([](const ExperimentTable& t) -> const TableRow& { return t.avg; }, s.mean.avg,
                s.stddev.avg);
  return s;
}

std::string RenderSummary(const SeedSummary& summary) {
  std::vector<TableRow> spread = summary.stddev.rows;
  spread.push_back(summary.stddev.avg);
  std::ostringstream out;
  out << "mean ± std over " << summary.seeds << " seed(s)\n";
  out << RenderRows(summary.mean.rows, summary.mean.avg, &spread);
  return out.str();
}

}  // namespace fedchaos
