// Copyright 2026 The percq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace percq {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// SplitMix64 finalizer (Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless counter-based generator: the value at any counter is a pure
/// function of (key, counter), so draws are independent of evaluation order
/// and thread schedule. split() derives child keys for sub-streams such as
/// (master seed, trial index).
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  constexpr explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  constexpr CounterRng split(std::uint64_t stream) const {
    CounterRng child(0);
    child.key_ = mix64(mix64(key_ + kGolden * (stream + 1)) ^ 0x3c6ef372fe94f82bULL);
    return child;
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(mix64(key_ + kGolden * (counter + 1)) ^ key_);
  }

  /// 53-bit integer in [0, 2^53); uniform(c) == bits53(c) * 2^-53.
  constexpr std::uint64_t bits53(std::uint64_t counter) const { return bits(counter) >> 11; }

  /// Uniform double in [0, 1).
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits53(counter)) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by multiply-shift; bound > 0.
  constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits(counter)) * bound) >> 64);
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace percq
