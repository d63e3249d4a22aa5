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

#ifndef FEDCHAOS_RANDOM_H_
#define FEDCHAOS_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedchaos {

using Rng = std::mt19937_64;

// Mixes a base seed with stream labels (participant id, round, purpose) into
// an independent seed. Streams depend only on the labels, never on call order.
std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> labels);

// Stream purposes used with DeriveSeed.
namespace stream {
inline constexpr std::uint64_t kInit = 0x494e4954;
inline constexpr std::uint64_t kPartition = 0x50415254;
inline constexpr std::uint64_t kSplit = 0x53504c54;
inline constexpr std::uint64_t kPreTrain = 0x50524554;
inline constexpr std::uint64_t kRound = 0x524f554e;
inline constexpr std::uint64_t kChaosKey = 0x4348414f;
}  // namespace stream

}  // namespace fedchaos

#endif  // FEDCHAOS_RANDOM_H_
