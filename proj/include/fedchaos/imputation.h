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

#ifndef FEDCHAOS_IMPUTATION_H_
#define FEDCHAOS_IMPUTATION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fedchaos/cipher.h"
#include "fedchaos/partition.h"

namespace fedchaos {

// Summary of one feature in a donor's train split. Only these four fields
// ever leave the donor.
struct FeatureDistribution {
  std::string feature;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::uint64_t n = 0;

  friend bool operator==(const FeatureDistribution&, const FeatureDistribution&) = default;
};

// Removes the column from every split and records it as pending.
ParticipantData MaskFeature(const ParticipantData& participant, const std::string& feature);

// Reads the donor's train split only.
FeatureDistribution ComputeFeatureDistribution(const ParticipantData& donor,
                                               const std::string& feature);

// Wire layout: u32 name length | name bytes | f64 mean | f64 std | u64 n,
// little-endian, then XOR-encrypted.
Bytes SerializeDistribution(const FeatureDistribution& dist);
FeatureDistribution DeserializeDistribution(std::span<const std::uint8_t> bytes);

CipherBlob ShareDistributionEncrypted(const FeatureDistribution& dist, const ChaosKey& key);
// Throws an integrity error when the payload does not parse (wrong key).
FeatureDistribution ReceiveDistribution(const CipherBlob& blob, const ChaosKey& key);

// Re-inserts the pending column at its original position in every split,
// filled with dist.mean.
ParticipantData ImputeMissing(const ParticipantData& masked, const FeatureDistribution& dist);

// The largest participant other than `recipient` (lowest index on ties).
std::size_t SelectDonor(const std::vector<ParticipantData>& participants, std::size_t recipient);

}  // namespace fedchaos

#endif  // FEDCHAOS_IMPUTATION_H_
