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

#include "fedchaos/pipeline.h"

#include "fedchaos/error.h"
#include "fedchaos/random.h"

namespace fedchaos {

ParticipantData StandardizeParticipant(const ParticipantData& participant) {
  ParticipantData out = participant;
  auto z = Standardize(participant.train, {participant.val, participant.test});
  out.train = std::move(z.train);
  out.val = std::move(z.others[0]);
  out.test = std::move(z.others[1]);
  return out;
}

PreparedData PrepareParticipants(const Dataset& dataset, const PartitionSpec& spec,
                                 std::size_t n_participants, const SplitRatios& ratios,
                                 const ChaosMode& cipher, std::uint64_t seed) {
  PartitionSpec seeded = spec;
  seeded.seed = seed;
  PreparedData out;
  const PartitionPlan plan = Partition(dataset, seeded, n_participants);
  out.manifest = MakeManifest(dataset, plan, ratios, seed);
  out.participants = Materialize(dataset, out.manifest);

  if (spec.missing_feature) {
    const auto& m = *spec.missing_feature;
    ImputationRecord rec;
    rec.recipient = m.participant;
    auto& recipient = out.participants.at(m.participant);
    recipient = MaskFeature(recipient, m.feature);
    rec.donor = m.donor ? *m.donor : SelectDonor(out.participants, m.participant);
    const FeatureDistribution dist =
        ComputeFeatureDistribution(out.participants.at(rec.donor), m.feature);
    // The donor and recipient share a pairwise key for this run.
    const ChaosKey key = DeriveChaosKey(cipher, DeriveSeed(seed, {rec.donor, rec.recipient}),
                                        n_participants);
    const CipherBlob blob = ShareDistributionEncrypted(dist, key);
    rec.blob_bytes = blob.length();
    rec.received = ReceiveDistribution(blob, key);
    recipient = ImputeMissing(recipient, rec.received);
    out.imputation = rec;
  }

  for (auto& p : out.participants) p = StandardizeParticipant(p);
  return out;
}

SeedRun RunSeed(const RunConfig& config, const Dataset& dataset, std::uint64_t seed,
                const std::vector<std::string>& modes) {
  SeedRun run;
  run.seed = seed;
  run.data = PrepareParticipants(dataset, config.partition, config.participants, config.split,
                                 config.chaos, seed);
  const NetworkConfig network = config.Network(dataset.features.cols());
  for (const auto& mode : modes.empty() ? config.modes : modes) {
    run.results[mode] = RunFederation(config.Federation(mode, seed), run.data.participants, network);
  }
  run.table = BuildTable(run.results);
  return run;
}

}  // namespace fedchaos
