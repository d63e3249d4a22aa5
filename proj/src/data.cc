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

#include "fedchaos/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> SplitRecord(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : Trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    Fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(was_quoted ? cur : Trim(cur));
  return fields;
}

std::optional<double> ParseNumber(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double Dataset::PositiveRate() const {
  if (labels.empty()) return 0.0;
  std::size_t pos = 0;
  for (int y : labels) pos += y == 1;
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

std::size_t Dataset::FeatureIndex(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) Fail(ErrorCode::kSchema, "unknown feature '" + name + "'");
  return static_cast<std::size_t>(it - feature_names.begin());
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.features = features.SelectRows(rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels.at(r));
  return out;
}

Dataset ParseCsv(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitRecord(line, line_no);
      break;
    }
  }
  if (header.empty()) Fail(ErrorCode::kFormat, "file has no header row");

  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto label_col = find_col(options.label_column);
  if (!label_col) {
    Fail(ErrorCode::kSchema, "label column '" + options.label_column + "' not in header");
  }
  std::vector<bool> keep(header.size(), true);
  keep[*label_col] = false;
  for (const auto& name : options.drop_columns) {
    const auto col = find_col(name);
    if (!col) Fail(ErrorCode::kSchema, "drop column '" + name + "' not in header");
    keep[*col] = false;
  }

  auto is_missing = [&](const std::string& cell) {
    return std::find(options.missing_tokens.begin(), options.missing_tokens.end(),
                     cell) != options.missing_tokens.end();
  };

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitRecord(line, line_no);
    if (fields.size() != header.size()) {
      Fail(ErrorCode::kFormat, "line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(header.size()) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    if (is_missing(fields[*label_col])) continue;
    records.push_back(std::move(fields));
    record_lines.push_back(line_no);
  }
  if (records.empty()) Fail(ErrorCode::kFormat, "file has no labelled rows");

  Dataset ds;

  // Labels.
  {
    bool numeric = true;
    for (const auto& rec : records) numeric = numeric && ParseNumber(rec[*label_col]).has_value();
    if (numeric && options.positive_label.empty()) {
      for (std::size_t i = 0; i < records.size(); ++i) {
        const double v = *ParseNumber(records[i][*label_col]);
        if (v != 0.0 && v != 1.0) {
          Fail(ErrorCode::kSchema, "line " + std::to_string(record_lines[i]) +
                                       ", column '" + options.label_column +
                                       "': label " + records[i][*label_col] +
                                       " is not 0 or 1");
        }
        ds.labels.push_back(static_cast<int>(v));
      }
    } else {
      std::vector<std::string> cats;
      for (const auto& rec : records) cats.push_back(rec[*label_col]);
      std::sort(cats.begin(), cats.end());
      cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
      if (cats.size() > 2) {
        Fail(ErrorCode::kSchema, "label column '" + options.label_column + "' has " +
                                     std::to_string(cats.size()) + " classes, expected 2");
      }
      const std::string positive =
          options.positive_label.empty() ? cats.back() : options.positive_label;
      if (cats.size() == 2 && std::find(cats.begin(), cats.end(), positive) == cats.end()) {
        Fail(ErrorCode::kSchema, "positive label '" + positive + "' never occurs");
      }
      for (const auto& rec : records) ds.labels.push_back(rec[*label_col] == positive ? 1 : 0);
    }
  }

  // Features.
  std::vector<std::vector<double>> columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!keep[c]) continue;
    bool numeric = true;
    for (const auto& rec : records) {
      if (!is_missing(rec[c]) && !ParseNumber(rec[c])) {
        numeric = false;
        break;
      }
    }
    std::map<std::string, double> codes;
    if (!numeric) {
      for (const auto& rec : records) {
        if (!is_missing(rec[c])) codes.emplace(rec[c], 0.0);
      }
      double next = 0.0;
      for (auto& [name, code] : codes) code = next++;
    }
    std::vector<double> col(records.size(), std::nan(""));
    std::vector<double> present;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& cell = records[i][c];
      if (is_missing(cell)) continue;
      col[i] = numeric ? *ParseNumber(cell) : codes.at(cell);
      present.push_back(col[i]);
    }
    if (present.empty()) {
      Fail(ErrorCode::kSchema, "column '" + header[c] + "' has no values");
    }
    if (present.size() < col.size()) {
      const double median = Median(present);
      for (double& v : col) {
        if (std::isnan(v)) v = median;
      }
    }
    ds.feature_names.push_back(header[c]);
    columns.push_back(std::move(col));
  }
  if (columns.empty()) Fail(ErrorCode::kSchema, "no feature columns");

  ds.features = Tensor2(records.size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < records.size(); ++r) ds.features(r, c) = columns[c][r];
  }
  return ds;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream file(path, std::ios::binary);
  if (!file) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  try {
    return ParseCsv(buf.str(), options);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " +
                              std::string(e.what()).substr(ErrorCodeName(e.code()).size() + 2));
  }
}

Standardized Standardize(const Dataset& train, const std::vector<Dataset>& others) {
  const std::size_t n_features = train.features.cols();
  for (const auto& ds : others) {
    if (ds.features.cols() != n_features) {
      Fail(ErrorCode::kDimension, "splits disagree on feature count");
    }
  }
  if (train.size() == 0) Fail(ErrorCode::kConfiguration, "cannot standardize an empty train split");
  std::vector<double> mean(n_features, 0.0), stddev(n_features, 0.0);
  const double n = static_cast<double>(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) {
    for (std::size_t c = 0; c < n_features; ++c) mean[c] += train.features(r, c);
  }
  for (double& m : mean) m /= n;
  for (std::size_t r = 0; r < train.size(); ++r) {
    for (std::size_t c = 0; c < n_features; ++c) {
      const double d = train.features(r, c) - mean[c];
      stddev[c] += d * d;
    }
  }
  for (double& s : stddev) s = std::sqrt(s / n);

  auto apply = [&](Dataset ds) {
    for (std::size_t r = 0; r < ds.size(); ++r) {
      for (std::size_t c = 0; c < n_features; ++c) {
        const double scale = stddev[c] > 0.0 ? stddev[c] : 1.0;
        ds.features(r, c) = (ds.features(r, c) - mean[c]) / scale;
      }
    }
    return ds;
  };
  Standardized out;
  out.train = apply(train);
  for (const auto& ds : others) out.others.push_back(apply(ds));
  return out;
}

}  // namespace fedchaos
