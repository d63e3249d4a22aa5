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

#include "fedchaos/nn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// out = in * W + b, for in (batch, fan_in) and W (fan_in, fan_out).
Tensor2 Affine(const Tensor2& in, const DenseLayer& layer) {
  const std::size_t fan_in = layer.weights.rows();
  const std::size_t fan_out = layer.weights.cols();
  Tensor2 out(in.rows(), fan_out);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(layer.bias.begin(), layer.bias.end(), dst.begin());
    auto src = in.row(r);
    for (std::size_t k = 0; k < fan_in; ++k) {
      const double x = src[k];
      if (x == 0.0) continue;
      auto w = layer.weights.row(k);
      for (std::size_t c = 0; c < fan_out; ++c) dst[c] += x * w[c];
    }
  }
  return out;
}

void CheckLabels(std::span<const int> labels) {
  for (int y : labels) {
    if (y != 0 && y != 1) Fail(ErrorCode::kDomain, "labels must be 0 or 1");
  }
}

}  // namespace

NetworkConfig NetworkConfig::ForFeatures(std::size_t n_features) {
  NetworkConfig config;
  config.layer_sizes = {n_features, 64, 32, 16, 8, 1};
  return config;
}

void NetworkConfig::Validate() const {
  if (layer_sizes.size() != 6) {
    Fail(ErrorCode::kConfiguration,
         "network.layer_sizes must list 6 widths (5 dense layers), got " +
             std::to_string(layer_sizes.size()));
  }
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] == 0) {
      Fail(ErrorCode::kConfiguration,
           "network.layer_sizes[" + std::to_string(i) + "] is zero");
    }
  }
  if (layer_sizes.back() != 1) {
    Fail(ErrorCode::kConfiguration, "network output width must be 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    Fail(ErrorCode::kConfiguration, "network.dropout must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kConfiguration, "network.learning_rate must be > 0");
  }
}

std::size_t ModelParams::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

std::vector<LayerShape> ModelParams::Shapes() const {
  std::vector<LayerShape> shapes;
  shapes.reserve(layers.size());
  for (const auto& layer : layers) {
    shapes.push_back({layer.weights.rows(), layer.weights.cols()});
  }
  return shapes;
}

bool ModelParams::AllFinite() const {
  bool finite = true;
  ForEach([&](double v) { finite = finite && std::isfinite(v); });
  return finite;
}

ModelParams ZerosWithShapes(std::span<const LayerShape> shapes) {
  ModelParams out;
  out.layers.reserve(shapes.size());
  for (const auto& s : shapes) {
    out.layers.push_back({Tensor2(s.rows, s.cols), std::vector<double>(s.cols)});
  }
  return out;
}

ModelParams ZerosLike(const ModelParams& params) {
  const auto shapes = params.Shapes();
  return ZerosWithShapes(shapes);
}

void CheckSameShape(const ModelParams& a, const ModelParams& b) {
  if (a.layers.size() != b.layers.size()) {
    Fail(ErrorCode::kDimension, "layer count differs");
  }
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& la = a.layers[i];
    const auto& lb = b.layers[i];
    if (la.weights.rows() != lb.weights.rows() ||
        la.weights.cols() != lb.weights.cols() ||
        la.bias.size() != lb.bias.size()) {
      Fail(ErrorCode::kDimension, "shape of layer " + std::to_string(i) + " differs");
    }
  }
}

void Axpy(double alpha, const ModelParams& x, ModelParams& y) {
  CheckSameShape(x, y);
  for (std::size_t i = 0; i < x.layers.size(); ++i) {
    auto xs = x.layers[i].weights.values();
    auto ys = y.layers[i].weights.values();
    for (std::size_t k = 0; k < xs.size(); ++k) ys[k] += alpha * xs[k];
    const auto& xb = x.layers[i].bias;
    auto& yb = y.layers[i].bias;
    for (std::size_t k = 0; k < xb.size(); ++k) yb[k] += alpha * xb[k];
  }
}

void Scale(ModelParams& params, double factor) {
  params.ForEachMutable([factor](double& v) { v *= factor; });
}

double L2Norm(const ModelParams& params) {
  double sum = 0.0;
  params.ForEach([&](double v) { sum += v * v; });
  return std::sqrt(sum);
}

double MaxAbsDiff(const ModelParams& a, const ModelParams& b) {
  CheckSameShape(a, b);
  std::vector<double> av;
  av.reserve(a.ParameterCount());
  a.ForEach([&](double v) { av.push_back(v); });
  double worst = 0.0;
  std::size_t k = 0;
  b.ForEach([&](double v) { worst = std::max(worst, std::abs(av[k++] - v)); });
  return worst;
}

ModelParams InitNetwork(const NetworkConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  ModelParams params;
  for (std::size_t i = 0; i + 1 < config.layer_sizes.size(); ++i) {
    const std::size_t fan_in = config.layer_sizes[i];
    const std::size_t fan_out = config.layer_sizes[i + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Tensor2(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
    for (double& w : layer.weights.values()) w = dist(rng);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

ForwardResult Forward(const ModelParams& params, const Tensor2& inputs,
                      Mode mode, double dropout_rate, Rng& rng) {
  if (params.layers.empty()) Fail(ErrorCode::kDimension, "network has no layers");
  if (inputs.cols() != params.layers.front().weights.rows()) {
    Fail(ErrorCode::kDimension,
         "input width " + std::to_string(inputs.cols()) + " does not match " +
             std::to_string(params.layers.front().weights.rows()));
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    Fail(ErrorCode::kConfiguration, "dropout rate must lie in [0, 1)");
  }
  if (params.layers.back().weights.cols() != 1) {
    Fail(ErrorCode::kDimension, "output layer must have width 1");
  }

  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.mode = mode;
  cache.batch_size = inputs.rows();
  cache.shapes = params.Shapes();

  const bool drop = mode == Mode::kTrain && dropout_rate > 0.0;
  const double keep_scale = drop ? 1.0 / (1.0 - dropout_rate) : 1.0;
  cache.keep_scale = keep_scale;
  std::bernoulli_distribution keep(1.0 - dropout_rate);

  const std::size_t n_layers = params.layers.size();
  const Tensor2* in = &inputs;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Tensor2 z = Affine(*in, params.layers[l]);
    Tensor2 a(z.rows(), z.cols());
    if (l + 1 < n_layers) {
      std::vector<bool> mask(z.size(), true);
      auto zs = z.values();
      auto as = a.values();
      for (std::size_t k = 0; k < zs.size(); ++k) {
        const double relu = zs[k] > 0.0 ? zs[k] : 0.0;
        if (drop) {
          mask[k] = keep(rng);
          as[k] = mask[k] ? relu * keep_scale : 0.0;
        } else {
          as[k] = relu;
        }
      }
      cache.masks.push_back(std::move(mask));
    } else {
      auto zs = z.values();
      auto as = a.values();
      for (std::size_t k = 0; k < zs.size(); ++k) as[k] = Sigmoid(zs[k]);
    }
    cache.pre_activations.push_back(std::move(z));
    cache.activations.push_back(std::move(a));
    in = &cache.activations.back();
  }
  const Tensor2& out = cache.activations.back();
  result.predictions.assign(out.values().begin(), out.values().end());
  return result;
}

std::vector<double> Predict(const ModelParams& params, const Tensor2& inputs) {
  Rng unused(0);
  return Forward(params, inputs, Mode::kEval, 0.0, unused).predictions;
}

double BceLoss(std::span<const double> predictions, std::span<const int> labels) {
  if (predictions.empty() || labels.empty()) {
    Fail(ErrorCode::kDomain, "bce loss of an empty batch");
  }
  if (predictions.size() != labels.size()) {
    Fail(ErrorCode::kDimension, "predictions and labels differ in length");
  }
  CheckLabels(labels);
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double p =
        std::clamp(predictions[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    total -= labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(predictions.size());
}

Gradients Backward(const ModelParams& params, const ForwardCache& cache,
                   const Tensor2& inputs, std::span<const int> labels) {
  const std::size_t n_layers = params.layers.size();
  const std::size_t batch = cache.batch_size;
  if (cache.shapes != params.Shapes() || cache.activations.size() != n_layers ||
      cache.pre_activations.size() != n_layers ||
      cache.masks.size() + 1 != n_layers || inputs.rows() != batch ||
      labels.size() != batch || batch == 0) {
    Fail(ErrorCode::kConsistency, "forward cache does not match this backward call");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    if (cache.activations[l].rows() != batch) {
      Fail(ErrorCode::kConsistency, "forward cache batch size is inconsistent");
    }
  }
  CheckLabels(labels);

  Gradients grads = ZerosLike(params);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  // dL/dz for the sigmoid output under mean BCE.
  Tensor2 delta(batch, 1);
  const Tensor2& out = cache.activations.back();
  for (std::size_t i = 0; i < batch; ++i) {
    delta(i, 0) = (out(i, 0) - labels[i]) * inv_batch;
  }

  for (std::size_t l = n_layers; l-- > 0;) {
    const Tensor2& prev = l == 0 ? inputs : cache.activations[l - 1];
    const DenseLayer& layer = params.layers[l];
    DenseLayer& g = grads.layers[l];
    const std::size_t fan_in = layer.weights.rows();
    const std::size_t fan_out = layer.weights.cols();
    for (std::size_t r = 0; r < batch; ++r) {
      auto d = delta.row(r);
      auto a = prev.row(r);
      for (std::size_t c = 0; c < fan_out; ++c) g.bias[c] += d[c];
      for (std::size_t k = 0; k < fan_in; ++k) {
        const double x = a[k];
        if (x == 0.0) continue;
        auto gw = g.weights.row(k);
        for (std::size_t c = 0; c < fan_out; ++c) gw[c] += x * d[c];
      }
    }
    if (l == 0) break;

    // Propagate into the hidden activation of layer l-1, through dropout and ReLU.
    Tensor2 next(batch, fan_in);
    const Tensor2& z_prev = cache.pre_activations[l - 1];
    const std::vector<bool>& mask = cache.masks[l - 1];
    for (std::size_t r = 0; r < batch; ++r) {
      auto d = delta.row(r);
      auto dn = next.row(r);
      for (std::size_t k = 0; k < fan_in; ++k) {
        const std::size_t idx = r * fan_in + k;
        if (!mask[idx] || z_prev(r, k) <= 0.0) continue;
        auto w = layer.weights.row(k);
        double s = 0.0;
        for (std::size_t c = 0; c < fan_out; ++c) s += w[c] * d[c];
        dn[k] = s * cache.keep_scale;
      }
    }
    delta = std::move(next);
  }
  return grads;
}

std::vector<Gradients> PerExampleBackward(const ModelParams& params,
                                          const Tensor2& inputs,
                                          std::span<const int> labels,
                                          Mode mode, double dropout_rate,
                                          Rng& rng) {
  if (inputs.rows() != labels.size()) {
    Fail(ErrorCode::kDimension, "inputs and labels differ in length");
  }
  std::vector<Gradients> out;
  out.reserve(inputs.rows());
  for (std::size_t i = 0; i < inputs.rows(); ++i) {
    const std::size_t idx[] = {i};
    Tensor2 x = inputs.SelectRows(idx);
    auto fwd = Forward(params, x, mode, dropout_rate, rng);
    out.push_back(Backward(params, fwd.cache, x, labels.subspan(i, 1)));
  }
  return out;
}

ModelParams SgdStep(const ModelParams& params, const Gradients& grads,
                    double learning_rate) {
  CheckSameShape(params, grads);
  if (!grads.AllFinite()) {
    Fail(ErrorCode::kNumerical, "non-finite gradient; step aborted");
  }
  ModelParams next = params;
  Axpy(-learning_rate, grads, next);
  return next;
}

}  // namespace fedchaos
