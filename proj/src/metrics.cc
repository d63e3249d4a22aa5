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

#include "fedchaos/metrics.h"

#include "fedchaos/error.h"

namespace fedchaos {

Labels Classify(std::span<const double> probabilities, double threshold) {
  Labels out;
  out.reserve(probabilities.size());
  for (double p : probabilities) out.push_back(p >= threshold ? 1 : 0);
  return out;
}

ConfusionCounts Confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    Fail(ErrorCode::kDimension, "predicted and true labels differ in length");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool t = truth[i] == 1;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double Accuracy(std::span<const int> predicted, std::span<const int> truth) {
  const auto c = Confusion(predicted, truth);
  if (truth.empty()) Fail(ErrorCode::kDomain, "accuracy of an empty label set");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(truth.size());
}

double F1(std::span<const int> predicted, std::span<const int> truth) {
  const auto c = Confusion(predicted, truth);
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return 0.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

Metrics Evaluate(const ModelParams& params, const Dataset& dataset) {
  if (dataset.size() == 0) Fail(ErrorCode::kConfiguration, "cannot evaluate on an empty split");
  const Labels predicted = Classify(Predict(params, dataset.features));
  return {Accuracy(predicted, dataset.labels), F1(predicted, dataset.labels), dataset.size()};
}

}  // namespace fedchaos
