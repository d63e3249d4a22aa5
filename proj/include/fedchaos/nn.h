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

#ifndef FEDCHAOS_NN_H_
#define FEDCHAOS_NN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedchaos/random.h"
#include "fedchaos/tensor.h"

namespace fedchaos {

using Labels = std::vector<int>;

// Shape of the binary classifier: input width, four hidden widths, output
// width 1. Hidden layers are ReLU followed by inverted dropout; the output is
// a sigmoid unit.
struct NetworkConfig {
  std::vector<std::size_t> layer_sizes;
  double dropout_rate = 0.3;
  double learning_rate = 0.01;
  std::size_t batch_size = 1;  // 0 = full batch

  // [n_features, 64, 32, 16, 8, 1].
  static NetworkConfig ForFeatures(std::size_t n_features);

  // Throws a configuration error on any invariant violation.
  void Validate() const;
};

struct DenseLayer {
  Tensor2 weights;  // (fan_in, fan_out)
  std::vector<double> bias;  // fan_out

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct LayerShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

// Weights and biases of every dense layer, input to output. The same type
// carries gradients.
struct ModelParams {
  std::vector<DenseLayer> layers;

  std::size_t ParameterCount() const;
  std::vector<LayerShape> Shapes() const;
  bool AllFinite() const;

  // Visits every scalar, layer-major: weights row-major, then bias.
  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (const auto& layer : layers) {
      for (double v : layer.weights.values()) fn(v);
      for (double v : layer.bias) fn(v);
    }
  }
  template <typename Fn>
  void ForEachMutable(Fn&& fn) {
    for (auto& layer : layers) {
      for (double& v : layer.weights.values()) fn(v);
      for (double& v : layer.bias) fn(v);
    }
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

using Gradients = ModelParams;

ModelParams ZerosLike(const ModelParams& params);
ModelParams ZerosWithShapes(std::span<const LayerShape> shapes);
// Throws a dimension error when the layer shapes differ.
void CheckSameShape(const ModelParams& a, const ModelParams& b);
// y += alpha * x
void Axpy(double alpha, const ModelParams& x, ModelParams& y);
void Scale(ModelParams& params, double factor);
// Global L2 norm over every entry.
double L2Norm(const ModelParams& params);
double MaxAbsDiff(const ModelParams& a, const ModelParams& b);

ModelParams InitNetwork(const NetworkConfig& config, std::uint64_t seed);

enum class Mode { kTrain, kEval };

struct ForwardCache {
  Mode mode = Mode::kEval;
  std::size_t batch_size = 0;
  double keep_scale = 1.0;  // 1 / (1 - dropout) in train mode
  std::vector<LayerShape> shapes;
  std::vector<Tensor2> pre_activations;  // one per layer
  std::vector<Tensor2> activations;      // post ReLU/dropout (hidden), sigmoid (last)
  std::vector<std::vector<bool>> masks;  // one per hidden layer, true = kept
};

struct ForwardResult {
  std::vector<double> predictions;
  ForwardCache cache;
};

ForwardResult Forward(const ModelParams& params, const Tensor2& inputs,
                      Mode mode, double dropout_rate, Rng& rng);

// Eval-mode forward pass.
std::vector<double> Predict(const ModelParams& params, const Tensor2& inputs);

inline constexpr double kProbabilityClamp = 1e-12;

// Mean binary cross-entropy with predictions clamped to [1e-12, 1 - 1e-12].
double BceLoss(std::span<const double> predictions, std::span<const int> labels);

// Gradient of the mean BCE over the cached batch, using the cached dropout
// masks. Throws a consistency error if the cache does not match.
Gradients Backward(const ModelParams& params, const ForwardCache& cache,
                   const Tensor2& inputs, std::span<const int> labels);

// One gradient per example, each from its own forward pass (and dropout
// masks when mode is train), drawn in example order from `rng`.
std::vector<Gradients> PerExampleBackward(const ModelParams& params,
                                          const Tensor2& inputs,
                                          std::span<const int> labels,
                                          Mode mode, double dropout_rate,
                                          Rng& rng);

// w <- w - learning_rate * g. Throws a numerical error, leaving nothing
// applied, if any gradient entry is non-finite.
ModelParams SgdStep(const ModelParams& params, const Gradients& grads,
                    double learning_rate);

}  // namespace fedchaos

#endif  // FEDCHAOS_NN_H_
