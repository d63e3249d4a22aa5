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

#include "fedchaos/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fedchaos/error.h"

namespace fedchaos {

void DpConfig::Validate() const {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    Fail(ErrorCode::kConfiguration, "privacy.dp_clip_norm must be > 0");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    Fail(ErrorCode::kConfiguration, "privacy.dp_noise_scale must be >= 0");
  }
  if (lot_size < 1) {
    Fail(ErrorCode::kConfiguration, "privacy.dp_lot_size must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    Fail(ErrorCode::kConfiguration, "privacy.dp_delta must lie in (0, 1)");
  }
}

Gradients ClipGradient(const Gradients& grad, double clip_norm) {
  if (!(clip_norm > 0.0)) Fail(ErrorCode::kConfiguration, "clip norm must be > 0");
  if (!grad.AllFinite()) Fail(ErrorCode::kNumerical, "cannot clip a non-finite gradient");
  const double norm = L2Norm(grad);
  if (norm <= clip_norm) return grad;
  Gradients out = grad;
  Scale(out, clip_norm / norm);
  return out;
}

Gradients GaussianNoise(const ModelParams& like, double stddev, Rng& rng) {
  Gradients noise = ZerosLike(like);
  if (stddev == 0.0) return noise;
  std::normal_distribution<double> dist(0.0, stddev);
  noise.ForEachMutable([&](double& v) { v = dist(rng); });
  return noise;
}

ModelParams DpSgdStep(const ModelParams& params,
                      const std::vector<Gradients>& per_example,
                      const DpConfig& config, double learning_rate, Rng& rng) {
  config.Validate();
  if (per_example.size() != config.lot_size) {
    Fail(ErrorCode::kConfiguration,
         "lot holds " + std::to_string(per_example.size()) +
             " examples, expected " + std::to_string(config.lot_size));
  }
  Gradients sum = ZerosLike(params);
  for (const auto& g : per_example) Axpy(1.0, ClipGradient(g, config.clip_norm), sum);
  Axpy(1.0, GaussianNoise(params, config.noise_scale * config.clip_norm, rng), sum);
  Scale(sum, 1.0 / static_cast<double>(config.lot_size));
  return SgdStep(params, sum, learning_rate);
}

PrivacySpent EstimateEpsilon(const DpConfig& config, std::size_t steps,
                             std::size_t dataset_size) {
  config.Validate();
  if (dataset_size == 0) Fail(ErrorCode::kConfiguration, "dataset size must be > 0");
  PrivacySpent spent;
  spent.delta = config.delta;
  spent.steps = steps;
  if (steps == 0) return spent;
  if (config.noise_scale == 0.0) {
    spent.epsilon = std::numeric_limits<double>::infinity();
    spent.unbounded = true;
    return spent;
  }
  const double q = std::min(1.0, static_cast<double>(config.lot_size) /
                                     static_cast<double>(dataset_size));
  // The sensitivity C cancels against the noise stddev sigma * C.
  const double eps0 = std::sqrt(2.0 * std::log(1.25 / config.delta)) *
                      (config.clip_norm / (config.noise_scale * config.clip_norm));
  const double eps_step = q * eps0;
  const double k = static_cast<double>(steps);
  spent.epsilon = eps_step * std::sqrt(2.0 * k * std::log(1.0 / config.delta)) +
                  k * eps_step * std::expm1(eps_step);
  return spent;
}

}  // namespace fedchaos
