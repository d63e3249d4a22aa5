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

#ifndef FEDCHAOS_PRIVACY_H_
#define FEDCHAOS_PRIVACY_H_

#include <cstddef>
#include <vector>

#include "fedchaos/nn.h"
#include "fedchaos/random.h"

namespace fedchaos {

struct DpConfig {
  double clip_norm = 4.0;    // C
  double noise_scale = 1.0;  // sigma
  std::size_t lot_size = 4;   // L
  double delta = 1e-5;

  void Validate() const;
};

// (epsilon, delta) spent after `steps` noisy updates. `unbounded` is set when
// no noise was added, in which case epsilon is +infinity.
struct PrivacySpent {
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t steps = 0;
  bool unbounded = false;

  friend bool operator==(const PrivacySpent&, const PrivacySpent&) = default;
};

// grad * min(1, C / ||grad||_2) with the norm taken over all entries.
Gradients ClipGradient(const Gradients& grad, double clip_norm);

// Gaussian noise N(0, (sigma * C)^2) per coordinate, shaped like `like`.
Gradients GaussianNoise(const ModelParams& like, double stddev, Rng& rng);

// One DP-SGD update: clip each example, sum, add one draw of
// N(0, sigma^2 C^2 I), divide by the lot size, then step.
ModelParams DpSgdStep(const ModelParams& params,
                      const std::vector<Gradients>& per_example,
                      const DpConfig& config, double learning_rate, Rng& rng);

// Conservative accounting: the Gaussian-mechanism epsilon
// sqrt(2 ln(1.25/delta)) / sigma, scaled by the sampling ratio L / N, then
// composed over `steps` with the strong composition bound. This is an upper
// estimate, not a moments-accountant figure.
PrivacySpent EstimateEpsilon(const DpConfig& config, std::size_t steps,
                             std::size_t dataset_size);

}  // namespace fedchaos

#endif  // FEDCHAOS_PRIVACY_H_
