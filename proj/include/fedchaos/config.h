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

#ifndef FEDCHAOS_CONFIG_H_
#define FEDCHAOS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedchaos/data.h"
#include "fedchaos/federation.h"
#include "fedchaos/partition.h"

namespace fedchaos {

// Everything needed to reproduce one experiment cell. See configs/*.ini for
// the file layout; unknown sections or keys are rejected.
struct RunConfig {
  std::filesystem::path data_path;
  CsvOptions csv;

  std::vector<std::size_t> hidden = {64, 32, 16, 8};
  double dropout = 0.3;
  double learning_rate = 0.01;
  std::size_t batch_size = 1;

  std::size_t participants = 5;
  std::size_t rounds_max = 10;
  std::size_t local_epochs = 5;
  std::optional<double> val_accuracy_threshold;
  std::size_t threads = 1;

  PartitionSpec partition;
  SplitRatios split;

  std::vector<std::string> modes = {"plain", "dp", "chaos"};
  DpConfig dp;
  ChaosMode chaos;

  std::filesystem::path out_dir = "results";
  std::vector<std::uint64_t> seeds = {1};

  // Throws a configuration error naming the offending field.
  void Validate() const;

  NetworkConfig Network(std::size_t n_features) const;
  PrivacyMode Mode(const std::string& name) const;
  FederationConfig Federation(const std::string& mode, std::uint64_t seed) const;
};

// Relative data paths resolve against `base_dir`.
RunConfig ParseRunConfig(const std::string& text, const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace fedchaos

#endif  // FEDCHAOS_CONFIG_H_
