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

#ifndef FEDCHAOS_PARTITION_H_
#define FEDCHAOS_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedchaos/data.h"

namespace fedchaos {

struct MissingFeatureSpec {
  std::size_t participant = 0;  // zero-based index of the participant lacking the column
  std::string feature;
  std::optional<std::size_t> donor;  // default: largest other participant
};

struct PartitionSpec {
  enum class Kind { kEven, kProportions, kForcedSmall };

  Kind kind = Kind::kEven;
  std::vector<double> proportions;  // kProportions
  std::size_t small_count = 2;      // kForcedSmall
  double small_cap = 0.10;          // kForcedSmall, fraction of all rows
  std::optional<std::vector<double>> label_skew;  // positive-rate target per participant
  std::optional<MissingFeatureSpec> missing_feature;
  std::uint64_t seed = 0;

  void Validate(std::size_t n_participants) const;
};

// Smallest share any participant may receive.
inline constexpr std::size_t kMinShareRows = 10;
inline constexpr double kProportionSumTolerance = 0.01 + 1e-9;

// Row indices of the dataset held by each participant; disjoint and covering.
struct PartitionPlan {
  std::vector<std::vector<std::size_t>> shares;
};

PartitionPlan Partition(const Dataset& dataset, const PartitionSpec& spec,
                        std::size_t n_participants);

struct SplitRatios {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;

  void Validate() const;
};

// Positions (into the given label vector) assigned to each split.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Stratified by label when both classes have at least 3 rows.
SplitIndices SplitTvt(std::span<const int> labels, const SplitRatios& ratios,
                      std::uint64_t seed);

struct ImputedFeature {
  std::string name;
  std::size_t index = 0;  // position in the full feature list
  bool completed = false;

  friend bool operator==(const ImputedFeature&, const ImputedFeature&) = default;
};

struct ParticipantData {
  std::size_t id = 0;
  Dataset train;
  Dataset val;
  Dataset test;
  double size_fraction = 0.0;  // share of all dataset rows
  double positive_rate = 0.0;  // over all three splits
  std::vector<ImputedFeature> imputed_features;

  std::size_t size() const { return train.size() + val.size() + test.size(); }
};

// Per-participant dataset row indices after splitting; enough to replay a run.
struct ManifestEntry {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct Manifest {
  std::uint64_t seed = 0;
  std::size_t dataset_rows = 0;
  std::vector<ManifestEntry> participants;
};

Manifest MakeManifest(const Dataset& dataset, const PartitionPlan& plan,
                      const SplitRatios& ratios, std::uint64_t seed);
std::vector<ParticipantData> Materialize(const Dataset& dataset, const Manifest& manifest);

void WriteManifest(std::ostream& out, const Manifest& manifest, const Dataset& dataset);
Manifest ReadManifest(std::istream& in);

}  // namespace fedchaos

#endif  // FEDCHAOS_PARTITION_H_
