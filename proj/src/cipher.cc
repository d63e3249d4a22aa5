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

#include "fedchaos/cipher.h"

#include <bit>
#include <cmath>
#include <string>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

constexpr std::uint8_t kMagic[4] = {'F', 'C', 'H', 'P'};
constexpr double kTwoPow32 = 4294967296.0;


void PutU32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutF64(Bytes& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }

  double F64() {
    Need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }

  std::uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) Fail(ErrorCode::kIntegrity, "parameter payload truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void ChaosKey::Validate() const {
  if (!(r >= 3.57 && r <= 4.0)) {
    Fail(ErrorCode::kConfiguration, "chaos key r must lie in [3.57, 4]");
  }
  if (!(x0 > 0.0 && x0 < 1.0)) {
    Fail(ErrorCode::kConfiguration, "chaos key x0 must lie in (0, 1)");
  }
  if (std::abs(x0 - (1.0 - 1.0 / r)) < 1e-15) {
    Fail(ErrorCode::kConfiguration, "chaos key x0 is the fixed point 1 - 1/r");
  }
}

double LogisticIterate(double x, double r) {
  if (!(x >= 0.0 && x <= 1.0)) Fail(ErrorCode::kDomain, "logistic map x outside [0, 1]");
  if (!(r >= 0.0 && r <= 4.0)) Fail(ErrorCode::kDomain, "logistic map r outside [0, 4]");
  return r * x * (1.0 - x);
}

Keystream::Keystream(const ChaosKey& key) : r_(key.r), x_(key.x0) {
  key.Validate();
  for (std::size_t i = 0; i < key.burn_in; ++i) x_ = LogisticIterate(x_, r_);
}

std::uint8_t Keystream::NextByte() {
  x_ = LogisticIterate(x_, r_);
  const double frac = x_ - std::floor(x_);
  const auto word = static_cast<std::uint64_t>(std::floor(frac * kTwoPow32));
  return static_cast<std::uint8_t>(word & 0xff);
}

Bytes KeystreamBytes(const ChaosKey& key, std::size_t n) {
  Keystream ks(key);
  Bytes out(n);
  for (auto& b : out) b = ks.NextByte();
  return out;
}

CipherBlob Encrypt(std::span<const std::uint8_t> plain, const ChaosKey& key) {
  Keystream ks(key);
  CipherBlob blob;
  blob.payload.resize(plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    blob.payload[i] = plain[i] ^ ks.NextByte();
  }
  return blob;
}

Bytes Decrypt(const CipherBlob& cipher, const ChaosKey& key) {
  // XOR with the same keystream is its own inverse.
  return Encrypt(cipher.payload, key).payload;
}

std::size_t SerializedSize(std::span<const LayerShape> shapes) {
  std::size_t n = kWireHeaderSize;
  for (const auto& s : shapes) n += 8 + 8 * (s.rows * s.cols + s.cols);
  return n;
}

Bytes SerializeParams(const ModelParams& params) {
  if (!params.AllFinite()) {
    Fail(ErrorCode::kNumerical, "cannot serialize non-finite parameters");
  }
  if (params.layers.size() > 255) {
    Fail(ErrorCode::kConfiguration, "wire format holds at most 255 layers");
  }
  const auto shapes = params.Shapes();
  Bytes out(std::begin(kMagic), std::end(kMagic));
  out.reserve(SerializedSize(shapes));
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(params.layers.size()));
  out.resize(kWireHeaderSize, 0);
  for (const auto& layer : params.layers) {
    PutU32(out, static_cast<std::uint32_t>(layer.weights.rows()));
    PutU32(out, static_cast<std::uint32_t>(layer.weights.cols()));
    for (double v : layer.weights.values()) PutF64(out, v);
    for (double v : layer.bias) PutF64(out, v);
  }
  return out;
}

ModelParams DeserializeParams(std::span<const std::uint8_t> bytes,
                              std::span<const LayerShape> expected_shapes) {
  if (bytes.size() != SerializedSize(expected_shapes)) {
    Fail(ErrorCode::kIntegrity,
         "payload is " + std::to_string(bytes.size()) + " bytes, expected " +
             std::to_string(SerializedSize(expected_shapes)));
  }
  Reader in(bytes);
  for (std::uint8_t m : kMagic) {
    if (in.U8() != m) Fail(ErrorCode::kIntegrity, "bad magic (wrong key or corrupted payload)");
  }
  if (in.U8() != kWireVersion) Fail(ErrorCode::kIntegrity, "unsupported wire version");
  if (in.U8() != expected_shapes.size()) Fail(ErrorCode::kIntegrity, "layer count mismatch");
  for (std::size_t i = 0; i < 10; ++i) {
    if (in.U8() != 0) Fail(ErrorCode::kIntegrity, "reserved header bytes are not zero");
  }
  ModelParams params;
  for (const auto& shape : expected_shapes) {
    const std::uint32_t rows = in.U32();
    const std::uint32_t cols = in.U32();
    if (rows != shape.rows || cols != shape.cols) {
      Fail(ErrorCode::kIntegrity, "layer shape mismatch");
    }
    DenseLayer layer{Tensor2(rows, cols), std::vector<double>(cols)};
    for (double& v : layer.weights.values()) v = in.F64();
    for (double& v : layer.bias) v = in.F64();
    params.layers.push_back(std::move(layer));
  }
  if (!params.AllFinite()) {
    Fail(ErrorCode::kIntegrity, "payload decodes to non-finite values");
  }
  return params;
}

CipherBlob SealParams(const ModelParams& params, const ChaosKey& key) {
  return Encrypt(SerializeParams(params), key);
}

ModelParams OpenParams(const CipherBlob& blob, const ChaosKey& key,
                       std::span<const LayerShape> expected_shapes) {
  return DeserializeParams(Decrypt(blob, key), expected_shapes);
}

}  // namespace fedchaos
