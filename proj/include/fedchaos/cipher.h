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

#ifndef FEDCHAOS_CIPHER_H_
#define FEDCHAOS_CIPHER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedchaos/nn.h"

namespace fedchaos {

using Bytes = std::vector<std::uint8_t>;

// Secret for the logistic-map keystream. r must keep the map chaotic,
// x0 must not start on a fixed point.
struct ChaosKey {
  double r = 3.8;
  double x0 = 0.5;
  std::size_t burn_in = 1000;

  void Validate() const;

  friend bool operator==(const ChaosKey&, const ChaosKey&) = default;
};

struct CipherBlob {
  Bytes payload;

  std::size_t length() const { return payload.size(); }

  friend bool operator==(const CipherBlob&, const CipherBlob&) = default;
};

// r * x * (1 - x). Throws a domain error for x outside [0, 1] or r outside [0, 4].
double LogisticIterate(double x, double r);

// Stateful byte generator; two generators built from equal keys emit equal
// streams.
class Keystream {
 public:
  explicit Keystream(const ChaosKey& key);

  // Advances the map once and returns floor(frac(x) * 2^32) mod 256.
  std::uint8_t NextByte();

  double state() const { return x_; }

 private:
  double r_;
  double x_;
};

Bytes KeystreamBytes(const ChaosKey& key, std::size_t n);

CipherBlob Encrypt(std::span<const std::uint8_t> plain, const ChaosKey& key);
Bytes Decrypt(const CipherBlob& cipher, const ChaosKey& key);

// Canonical little-endian parameter wire format:
//   header  "FCHP" | u8 version (1) | u8 layer count | 10 zero bytes
//   layer   u32 rows | u32 cols | rows*cols f64 weights | cols f64 bias
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kWireHeaderSize = 16;

Bytes SerializeParams(const ModelParams& params);
std::size_t SerializedSize(std::span<const LayerShape> shapes);
// Throws an integrity error on any header, length, or shape mismatch.
ModelParams DeserializeParams(std::span<const std::uint8_t> bytes,
                              std::span<const LayerShape> expected_shapes);

CipherBlob SealParams(const ModelParams& params, const ChaosKey& key);
ModelParams OpenParams(const CipherBlob& blob, const ChaosKey& key,
                       std::span<const LayerShape> expected_shapes);

}  // namespace fedchaos

#endif  // FEDCHAOS_CIPHER_H_
