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

#ifndef FEDCHAOS_PIPELINE_H_
#define FEDCHAOS_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedchaos/config.h"
#include "fedchaos/imputation.h"
#include "fedchaos/report.h"

namespace fedchaos {

struct ImputationRecord {
  std::size_t recipient = 0;
  std::size_t donor = 0;
  FeatureDistribution received;
  std::size_t blob_bytes = 0;
};

struct PreparedData {
  Manifest manifest;
  std::vector<ParticipantData> participants;  // standardized, imputed
  std::optional<ImputationRecord> imputation;
};

// partition -> split -> (mask, encrypted distribution share, impute) ->
// per-participant standardization with its own train statistics.
PreparedData PrepareParticipants(const Dataset& dataset, const PartitionSpec& spec,
                                 std::size_t n_participants, const SplitRatios& ratios,
                                 const ChaosMode& cipher, std::uint64_t seed);

// Standardizes all three splits with the train split's statistics.
ParticipantData StandardizeParticipant(const ParticipantData& participant);

struct SeedRun {
  std::uint64_t seed = 0;
  PreparedData data;
  std::map<std::string, FederationResult> results;  // keyed by mode name
  ExperimentTable table;
};

// One seed of an experiment across `modes` (all configured modes when empty).
SeedRun RunSeed(const RunConfig& config, const Dataset& dataset, std::uint64_t seed,
                const std::vector<std::string>& modes = {});

}  // namespace fedchaos

#endif  // FEDCHAOS_PIPELINE_H_
