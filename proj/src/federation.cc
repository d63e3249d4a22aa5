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

#include "fedchaos/federation.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "fedchaos/error.h"
#include "parallel.h"

namespace fedchaos {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double MeanOf(std::span<const ParticipantOutcome> outcomes, bool post) {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : outcomes) sum += post ? o.post.accuracy : o.pre.accuracy;
  return sum / static_cast<double>(outcomes.size());
}

ModelParams PlainEpoch(const ModelParams& start, const Dataset& train,
                       const NetworkConfig& network, Rng& rng) {
  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t batch = network.batch_size == 0 ? n : std::min(network.batch_size, n);
  ModelParams params = start;
  for (std::size_t at = 0; at < n; at += batch) {
    const std::size_t len = std::min(batch, n - at);
    const std::span<const std::size_t> idx(order.data() + at, len);
    const Tensor2 x = train.features.SelectRows(idx);
    Labels y;
    for (std::size_t k : idx) y.push_back(train.labels[k]);
    auto fwd = Forward(params, x, Mode::kTrain, network.dropout_rate, rng);
    params = SgdStep(params, Backward(params, fwd.cache, x, y), network.learning_rate);
  }
  return params;
}

ModelParams DpEpoch(const ModelParams& start, const Dataset& train, const DpConfig& dp,
                    const NetworkConfig& network, Rng& rng) {
  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t lot = std::min(dp.lot_size, n);
  ModelParams params = start;
  for (std::size_t at = 0; at < n; at += lot) {
    const std::size_t len = std::min(lot, n - at);
    const std::span<const std::size_t> idx(order.data() + at, len);
    const Tensor2 x = train.features.SelectRows(idx);
    Labels y;
    for (std::size_t k : idx) y.push_back(train.labels[k]);
    const auto grads = PerExampleBackward(params, x, y, Mode::kTrain, network.dropout_rate, rng);
    DpConfig step_config = dp;
    step_config.lot_size = len;  // a trailing short lot is averaged over its own size
    params = DpSgdStep(params, grads, step_config, network.learning_rate, rng);
  }
  return params;
}

}  // namespace

std::string_view ModeName(const PrivacyMode& mode) {
  return std::visit(Overloaded{[](const PlainMode&) { return std::string_view("plain"); },
                               [](const DpMode&) { return std::string_view("dp"); },
                               [](const ChaosMode&) { return std::string_view("chaos"); }},
                    mode);
}

void FederationConfig::Validate() const {
  if (n_participants < 2) Fail(ErrorCode::kConfiguration, "federation.participants must be >= 2");
  if (local_epochs < 1) Fail(ErrorCode::kConfiguration, "federation.local_epochs must be >= 1");
  if (val_accuracy_threshold && !(*val_accuracy_threshold >= 0.0)) {
    Fail(ErrorCode::kConfiguration, "federation.val_accuracy_threshold must be >= 0");
  }
  if (const auto* dp = std::get_if<DpMode>(&mode)) dp->config.Validate();
  if (const auto* chaos = std::get_if<ChaosMode>(&mode)) {
    if (!(chaos->r >= 3.57 && chaos->r <= 4.0)) {
      Fail(ErrorCode::kConfiguration, "privacy.chaos_r must lie in [3.57, 4]");
    }
  }
}

double FederationResult::MeanPreAccuracy() const { return MeanOf(participants, false); }
double FederationResult::MeanPostAccuracy() const { return MeanOf(participants, true); }

std::size_t DpStepsPerEpoch(std::size_t n_train, std::size_t lot_size) {
  if (n_train == 0) return 0;
  const std::size_t lot = std::min(lot_size, n_train);
  return (n_train + lot - 1) / lot;
}

ModelParams LocalTrain(const ParticipantData& participant, const ModelParams& global,
                       std::size_t epochs, const PrivacyMode& mode,
                       const NetworkConfig& network, Rng& rng) {
  const Dataset& train = participant.train;
  if (train.size() == 0) {
    Fail(ErrorCode::kConfiguration,
         "participant " + std::to_string(participant.id + 1) + " has an empty train split");
  }
  ModelParams params = global;
  const auto* dp = std::get_if<DpMode>(&mode);
  for (std::size_t e = 0; e < epochs; ++e) {
    params = dp ? DpEpoch(params, train, dp->config, network, rng)
                : PlainEpoch(params, train, network, rng);
  }
  return params;
}

ModelParams SimulateWire(const ModelParams& params, const ChaosKey& seal_key,
                         const ChaosKey& open_key) {
  const auto shapes = params.Shapes();
  return OpenParams(SealParams(params, seal_key), open_key, shapes);
}

ModelParams Transmit(const ModelParams& params, const PrivacyMode& mode,
                     const std::optional<ChaosKey>& key) {
  const bool chaos = std::holds_alternative<ChaosMode>(mode);
  if (chaos != key.has_value()) {
    Fail(ErrorCode::kConfiguration, "a chaos key is required exactly when the mode is chaos");
  }
  if (!chaos) return params;
  return SimulateWire(params, *key, *key);
}

ModelParams FedAvg(std::span<const WeightedUpdate> updates) {
  if (updates.empty()) Fail(ErrorCode::kConfiguration, "fed_avg of no updates");
  std::size_t total = 0;
  for (const auto& u : updates) {
    CheckSameShape(updates.front().params, u.params);
    total += u.n_samples;
  }
  if (total == 0) Fail(ErrorCode::kConfiguration, "fed_avg weights sum to zero");
  ModelParams out = ZerosLike(updates.front().params);
  for (const auto& u : updates) {
    if (u.n_samples == 0) continue;
    Axpy(static_cast<double>(u.n_samples) / static_cast<double>(total), u.params, out);
  }
  return out;
}

double GlobalLoss(std::span<const ParticipantData> participants, const ModelParams& params) {
  if (participants.empty()) Fail(ErrorCode::kConfiguration, "global loss over no participants");
  double sum = 0.0;
  for (const auto& p : participants) {
    sum += BceLoss(Predict(params, p.train.features), p.train.labels);
  }
  return sum / static_cast<double>(participants.size());
}

double MeanValAccuracy(std::span<const ParticipantData> participants, const ModelParams& params) {
  if (participants.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : participants) sum += Evaluate(params, p.val).accuracy;
  return sum / static_cast<double>(participants.size());
}

RoundOutcome RunRound(std::vector<Participant>& participants, const ModelParams& global,
                      const FederationConfig& config, const NetworkConfig& network,
                      std::size_t round) {
  std::vector<ParticipantData> data;
  data.reserve(participants.size());
  for (const auto& p : participants) data.push_back(p.data);

  RoundOutcome out;
  out.record.round = round;
  out.record.loss_before = GlobalLoss(data, global);

  std::vector<WeightedUpdate> updates(participants.size());
  ParallelFor(participants.size(), config.threads, [&](std::size_t i) {
    Participant& p = participants[i];
    Rng rng(DeriveSeed(config.seed, {stream::kRound, round, p.data.id}));
    p.local_params = LocalTrain(p.data, global, config.local_epochs, config.mode, network, rng);
    updates[i] = {Transmit(p.local_params, config.mode, p.chaos_key), p.data.train.size()};
  });
  out.global = FedAvg(updates);
  out.record.loss_after = GlobalLoss(data, out.global);
  out.record.mean_val_accuracy = MeanValAccuracy(data, out.global);
  return out;
}

bool CheckTermination(std::span<const RoundRecord> history, const FederationConfig& config) {
  if (history.size() >= config.rounds_max) return true;
  return config.val_accuracy_threshold && !history.empty() &&
         history.back().mean_val_accuracy >= *config.val_accuracy_threshold;
}

ChaosKey DeriveChaosKey(const ChaosMode& mode, std::uint64_t seed, std::size_t participant) {
  Rng rng(DeriveSeed(seed, {stream::kChaosKey, participant}));
  std::uniform_real_distribution<double> x0(0.01, 0.99);
  ChaosKey key{mode.r, x0(rng), mode.burn_in};
  while (std::abs(key.x0 - (1.0 - 1.0 / key.r)) < 1e-6) key.x0 = x0(rng);
  key.Validate();
  return key;
}

FederationResult RunFederation(const FederationConfig& config,
                               const std::vector<ParticipantData>& participants,
                               const NetworkConfig& network) {
  config.Validate();
  network.Validate();
  if (participants.size() != config.n_participants) {
    Fail(ErrorCode::kConfiguration, "expected " + std::to_string(config.n_participants) +
                                        " participants, got " + std::to_string(participants.size()));
  }
  for (const auto& p : participants) {
    if (p.train.size() == 0 || p.val.size() == 0 || p.test.size() == 0) {
      Fail(ErrorCode::kConfiguration,
           "participant " + std::to_string(p.id + 1) + " needs at least one row per split");
    }
    if (p.train.features.cols() != network.layer_sizes.front()) {
      Fail(ErrorCode::kDimension, "participant " + std::to_string(p.id + 1) + " has " +
                                      std::to_string(p.train.features.cols()) +
                                      " features; the network expects " +
                                      std::to_string(network.layer_sizes.front()));
    }
  }

  FederationResult result;
  result.initial_params = InitNetwork(network, DeriveSeed(config.seed, {stream::kInit}));

  std::vector<Participant> members;
  for (const auto& data : participants) {
    Participant p{data, result.initial_params, std::nullopt};
    if (const auto* chaos = std::get_if<ChaosMode>(&config.mode)) {
      p.chaos_key = DeriveChaosKey(*chaos, config.seed, data.id);
    }
    members.push_back(std::move(p));
  }

  // Pre-FL: local-only training with the same total epoch budget.
  result.participants.resize(members.size());
  const std::size_t solo_epochs = config.rounds_max * config.local_epochs;
  ParallelFor(members.size(), config.threads, [&](std::size_t i) {
    const ParticipantData& data = members[i].data;
    Rng rng(DeriveSeed(config.seed, {stream::kPreTrain, data.id}));
    const ModelParams solo =
        LocalTrain(data, result.initial_params, solo_epochs, config.mode, network, rng);
    auto& outcome = result.participants[i];
    outcome.id = data.id;
    outcome.size_fraction = data.size_fraction;
    outcome.positive_rate = data.positive_rate;
    outcome.pre = Evaluate(solo, data.test);
  });

  ModelParams global = result.initial_params;
  if (config.rounds_max > 0) {
    for (std::size_t round = 1;; ++round) {
      auto outcome = RunRound(members, global, config, network, round);
      global = std::move(outcome.global);
      result.history.push_back(outcome.record);
      if (CheckTermination(result.history, config)) break;
    }
  }
  result.final_params = global;
  for (std::size_t i = 0; i < members.size(); ++i) {
    result.participants[i].post = Evaluate(global, members[i].data.test);
  }

  if (const auto* dp = std::get_if<DpMode>(&config.mode)) {
    // Worst case over participants of the federated training's privacy cost.
    std::optional<PrivacySpent> worst;
    for (const auto& m : members) {
      const std::size_t n_train = m.data.train.size();
      DpConfig effective = dp->config;
      effective.lot_size = std::min(effective.lot_size, n_train);
      const std::size_t steps =
          result.history.size() * config.local_epochs * DpStepsPerEpoch(n_train, effective.lot_size);
      const PrivacySpent spent = EstimateEpsilon(effective, steps, n_train);
      if (!worst || spent.epsilon > worst->epsilon) worst = spent;
    }
    result.privacy_spent = worst;
  }
  return result;
}

}  // namespace fedchaos
