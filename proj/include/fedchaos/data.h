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

#ifndef FEDCHAOS_DATA_H_
#define FEDCHAOS_DATA_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fedchaos/nn.h"
#include "fedchaos/tensor.h"

namespace fedchaos {

// Feature matrix (one row per example) with binary labels.
struct Dataset {
  std::vector<std::string> feature_names;
  Tensor2 features;
  Labels labels;

  std::size_t size() const { return labels.size(); }
  double PositiveRate() const;
  // Throws a schema error if the column is unknown.
  std::size_t FeatureIndex(const std::string& name) const;
  Dataset Subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct CsvOptions {
  std::string label_column;
  std::vector<std::string> missing_tokens = {"?", "", "NaN"};
  std::vector<std::string> drop_columns;
  // For a categorical label column, the category mapped to 1. When empty the
  // two categories are ordered lexicographically and the second becomes 1.
  std::string positive_label;
};

// Reads a headered CSV. Numeric columns are parsed as doubles; any column
// with a non-numeric cell is categorical and coded 0..k-1 in sorted category
// order. Rows with a missing label are dropped and every other missing cell
// is filled with its column median.
Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options);
Dataset ParseCsv(const std::string& text, const CsvOptions& options);

struct Standardized {
  Dataset train;
  std::vector<Dataset> others;
};

// Z-scores every feature with the train split's mean and population std;
// zero-variance columns are only centered.
Standardized Standardize(const Dataset& train, const std::vector<Dataset>& others);

}  // namespace fedchaos

#endif  // FEDCHAOS_DATA_H_
