// Copyright 2026 The resalloc Authors.
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

#ifndef RESALLOC_RNG_HPP_
#define RESALLOC_RNG_HPP_

#include <cstdint>

namespace resalloc {

// Counter-based randomness: every draw is a pure function of its key, so a
// (seed, resource, round) triple always yields the same variate no matter
// which arms were played before.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Distinct streams keep reward noise and oracle coins decorrelated.
enum class Stream : std::uint64_t {
  kReward = 0x5245574152440001ULL,
  kOracleCoin = 0x434f494e00000002ULL,
  kInstance = 0x494e535400000003ULL,
};

inline constexpr std::uint64_t hash_key(std::uint64_t seed, Stream stream,
                                        std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

// Uniform on [0, 1) with 53 random bits.
inline constexpr double uniform01(std::uint64_t seed, Stream stream,
                                  std::uint64_t a, std::uint64_t b) {
  return static_cast<double>(hash_key(seed, stream, a, b) >> 11) * 0x1.0p-53;
}

// Seed for replication `index` of an experiment. Depends only on the pair,
// so adding replications never changes earlier ones.
inline constexpr std::uint64_t replication_seed(std::uint64_t base_seed,
                                                std::uint64_t index) {
  return base_seed ^ splitmix64(index);
}

}  // namespace resalloc

#endif  // RESALLOC_RNG_HPP_
