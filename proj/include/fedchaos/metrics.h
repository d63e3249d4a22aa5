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

#ifndef FEDCHAOS_METRICS_H_
#define FEDCHAOS_METRICS_H_

#include <cstddef>
#include <span>

#include "fedchaos/data.h"
#include "fedchaos/nn.h"

namespace fedchaos {

inline constexpr double kDecisionThreshold = 0.5;

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::size_t n_test = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

// 1 iff p >= threshold.
Labels Classify(std::span<const double> probabilities, double threshold = kDecisionThreshold);

ConfusionCounts Confusion(std::span<const int> predicted, std::span<const int> truth);
double Accuracy(std::span<const int> predicted, std::span<const int> truth);
// Positive-class F1, 2TP / (2TP + FP + FN); 0 when the denominator is 0.
double F1(std::span<const int> predicted, std::span<const int> truth);

Metrics Evaluate(const ModelParams& params, const Dataset& dataset);

}  // namespace fedchaos

#endif  // FEDCHAOS_METRICS_H_
