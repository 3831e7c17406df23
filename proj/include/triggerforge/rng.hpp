// Copyright 2026 The TriggerForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRIGGERFORGE_RNG_HPP_
#define TRIGGERFORGE_RNG_HPP_

#include <cstdint>
#include <string_view>

namespace triggerforge {

/// SplitMix64 finalizer:
///   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
///   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
///   z =  z ^ (z >> 31)
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t StableHash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Combines a master seed with a per-item key; used to give every app its
/// own stream independent of which other apps are present.
constexpr std::uint64_t MixSeeds(std::uint64_t master, std::uint64_t key) {
  return Mix64(master ^ Mix64(key + 0x9e3779b97f4a7c15ULL));
}

/// SplitMix64. Each draw adds the golden-ratio increment 0x9e3779b97f4a7c15
/// to the state and returns Mix64(state). Bit-identical on every platform.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix64(state_);
  }

  /// Uniform integer in [0, n) by rejection of the biased low range
  /// [0, 2^64 mod n). Requires n > 0.
  constexpr std::uint64_t Uniform(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = Next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace triggerforge

#endif  // TRIGGERFORGE_RNG_HPP_
