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

#include "fedchaos/imputation.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

void PutLe(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t GetLe(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes[at + i]} << (8 * i);
  return v;
}

}  // namespace

ParticipantData MaskFeature(const ParticipantData& participant, const std::string& feature) {
  const std::size_t col = participant.train.FeatureIndex(feature);
  ParticipantData out = participant;
  for (Dataset* ds : {&out.train, &out.val, &out.test}) {
    ds->features = ds->features.DropColumn(col);
    ds->feature_names.erase(ds->feature_names.begin() + static_cast<std::ptrdiff_t>(col));
  }
  out.imputed_features.push_back({feature, col, false});
  return out;
}

FeatureDistribution ComputeFeatureDistribution(const ParticipantData& donor,
                                               const std::string& feature) {
  const Dataset& train = donor.train;
  const std::size_t col = train.FeatureIndex(feature);
  if (train.size() == 0) Fail(ErrorCode::kConfiguration, "donor train split is empty");
  FeatureDistribution dist;
  dist.feature = feature;
  dist.n = train.size();
  double sum = 0.0;
  for (std::size_t r = 0; r < train.size(); ++r) sum += train.features(r, col);
  dist.mean = sum / static_cast<double>(dist.n);
  double ss = 0.0;
  for (std::size_t r = 0; r < train.size(); ++r) {
    const double d = train.features(r, col) - dist.mean;
    ss += d * d;
  }
  dist.stddev = std::sqrt(ss / static_cast<double>(dist.n));
  return dist;
}

Bytes SerializeDistribution(const FeatureDistribution& dist) {
  if (!std::isfinite(dist.mean) || !std::isfinite(dist.stddev)) {
    Fail(ErrorCode::kNumerical, "cannot share a non-finite distribution");
  }
  if (dist.feature.size() > 0xffffffffULL) Fail(ErrorCode::kConfiguration, "feature name too long");
  Bytes out;
  PutLe(out, dist.feature.size(), 4);
  out.insert(out.end(), dist.feature.begin(), dist.feature.end());
  PutLe(out, std::bit_cast<std::uint64_t>(dist.mean), 8);
  PutLe(out, std::bit_cast<std::uint64_t>(dist.stddev), 8);
  PutLe(out, dist.n, 8);
  return out;
}

FeatureDistribution DeserializeDistribution(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 28) Fail(ErrorCode::kIntegrity, "distribution payload too short");
  const std::uint64_t name_len = GetLe(bytes, 0, 4);
  if (name_len != bytes.size() - 28) {
    Fail(ErrorCode::kIntegrity, "distribution payload length does not match its header");
  }
  FeatureDistribution dist;
  dist.feature.assign(bytes.begin() + 4, bytes.begin() + 4 + static_cast<std::ptrdiff_t>(name_len));
  const std::size_t at = 4 + name_len;
  dist.mean = std::bit_cast<double>(GetLe(bytes, at, 8));
  dist.stddev = std::bit_cast<double>(GetLe(bytes, at + 8, 8));
  dist.n = GetLe(bytes, at + 16, 8);
  if (!std::isfinite(dist.mean) || !std::isfinite(dist.stddev) || dist.stddev < 0.0 || dist.n == 0) {
    Fail(ErrorCode::kIntegrity, "distribution payload holds invalid values");
  }
  return dist;
}

CipherBlob ShareDistributionEncrypted(const FeatureDistribution& dist, const ChaosKey& key) {
  return Encrypt(SerializeDistribution(dist), key);
}

FeatureDistribution ReceiveDistribution(const CipherBlob& blob, const ChaosKey& key) {
  return DeserializeDistribution(Decrypt(blob, key));
}

ParticipantData ImputeMissing(const ParticipantData& masked, const FeatureDistribution& dist) {
  ParticipantData out = masked;
  auto it = std::find_if(out.imputed_features.begin(), out.imputed_features.end(),
                         [&](const ImputedFeature& f) { return f.name == dist.feature && !f.completed; });
  if (it == out.imputed_features.end()) {
    Fail(ErrorCode::kSchema, "feature '" + dist.feature + "' is not pending imputation");
  }
  for (Dataset* ds : {&out.train, &out.val, &out.test}) {
    if (it->index > ds->feature_names.size()) Fail(ErrorCode::kDimension, "imputed column index out of range");
    ds->features = ds->features.InsertColumn(it->index, dist.mean);
    ds->feature_names.insert(ds->feature_names.begin() + static_cast<std::ptrdiff_t>(it->index),
                             dist.feature);
  }
  it->completed = true;
  return out;
}

std::size_t SelectDonor(const std::vector<ParticipantData>& participants, std::size_t recipient) {
  std::size_t best = participants.size();
  for (std::size_t i = 0; i < participants.size(); ++i) {
    if (i == recipient) continue;
    if (best == participants.size() || participants[i].size() > participants[best].size()) best = i;
  }
  if (best == participants.size()) Fail(ErrorCode::kConfiguration, "no donor participant available");
  return best;
}

}  // namespace fedchaos
