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

#ifndef FEDCHAOS_FEDERATION_H_
#define FEDCHAOS_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "fedchaos/cipher.h"
#include "fedchaos/metrics.h"
#include "fedchaos/nn.h"
#include "fedchaos/partition.h"
#include "fedchaos/privacy.h"

namespace fedchaos {

// How local models travel to the server.
struct PlainMode {};
struct DpMode {
  DpConfig config;
};
// Keys are derived per participant from the run seed; r and burn-in are shared.
struct ChaosMode {
  double r = 3.8;
  std::size_t burn_in = 1000;
};
using PrivacyMode = std::variant<PlainMode, DpMode, ChaosMode>;

std::string_view ModeName(const PrivacyMode& mode);

struct Participant {
  ParticipantData data;
  ModelParams local_params;
  std::optional<ChaosKey> chaos_key;  // present iff the mode is ChaosMode
};

struct FederationConfig {
  std::size_t n_participants = 5;
  std::size_t rounds_max = 10;
  std::size_t local_epochs = 5;
  std::optional<double> val_accuracy_threshold;
  PrivacyMode mode = PlainMode{};
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0 = hardware concurrency

  void Validate() const;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double loss_before = 0.0;
  double loss_after = 0.0;
  double mean_val_accuracy = 0.0;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct ParticipantOutcome {
  std::size_t id = 0;
  double size_fraction = 0.0;
  double positive_rate = 0.0;
  Metrics pre;
  Metrics post;

  friend bool operator==(const ParticipantOutcome&, const ParticipantOutcome&) = default;
};

struct FederationResult {
  std::vector<ParticipantOutcome> participants;
  std::vector<RoundRecord> history;
  ModelParams initial_params;
  ModelParams final_params;
  std::optional<PrivacySpent> privacy_spent;

  double MeanPreAccuracy() const;
  double MeanPostAccuracy() const;

  friend bool operator==(const FederationResult&, const FederationResult&) = default;
};

// Trains a copy of `global` for `epochs` passes over the participant's train
// split: mini-batch SGD for plain and chaos modes, DP-SGD over shuffled lots
// for DP mode.
ModelParams LocalTrain(const ParticipantData& participant, const ModelParams& global,
                       std::size_t epochs, const PrivacyMode& mode,
                       const NetworkConfig& network, Rng& rng);

// DP-SGD updates performed per epoch on a train split of `n_train` rows.
std::size_t DpStepsPerEpoch(std::size_t n_train, std::size_t lot_size);

// Simulated upload. Identity for plain and DP; seal then open for chaos.
ModelParams Transmit(const ModelParams& params, const PrivacyMode& mode,
                     const std::optional<ChaosKey>& key);
// Seal with one key, open with another; a mismatch surfaces as an integrity error.
ModelParams SimulateWire(const ModelParams& params, const ChaosKey& seal_key,
                         const ChaosKey& open_key);

struct WeightedUpdate {
  ModelParams params;
  std::size_t n_samples = 0;
};

// Sample-count weighted mean of the updates.
ModelParams FedAvg(std::span<const WeightedUpdate> updates);

// Unweighted mean over participants of the train-split BCE.
double GlobalLoss(std::span<const ParticipantData> participants, const ModelParams& params);

double MeanValAccuracy(std::span<const ParticipantData> participants, const ModelParams& params);

struct RoundOutcome {
  ModelParams global;
  RoundRecord record;
};

// Distribute, train locally (concurrently), transmit, aggregate. Each
// participant's generator is seeded from (config.seed, round, id).
RoundOutcome RunRound(std::vector<Participant>& participants, const ModelParams& global,
                      const FederationConfig& config, const NetworkConfig& network,
                      std::size_t round);

bool CheckTermination(std::span<const RoundRecord> history, const FederationConfig& config);

ChaosKey DeriveChaosKey(const ChaosMode& mode, std::uint64_t seed, std::size_t participant);

// Pre-FL baseline (each participant alone for rounds_max * local_epochs
// epochs from the shared initialization), then federated rounds until
// termination, then post-FL evaluation of the global model. Metrics are on
// each participant's own test split.
FederationResult RunFederation(const FederationConfig& config,
                               const std::vector<ParticipantData>& participants,
                               const NetworkConfig& network);

}  // namespace fedchaos

#endif  // FEDCHAOS_FEDERATION_H_
