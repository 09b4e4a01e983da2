// Copyright 2026 The mapstab Authors.
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

// Keyed random streams. Every stream is a std::mt19937_64 whose seed is
// derived from (global seed, key), so independent consumers (scenes,
// elements, frames) never share state and results do not depend on
// evaluation order.

#ifndef MAPSTAB_RANDOM_HPP_
#define MAPSTAB_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace mapstab {

inline constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                       std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using RandomEngine = std::mt19937_64;

inline RandomEngine make_stream(std::uint64_t seed, std::uint64_t key) {
  const std::uint64_t a = mix64(seed);
  const std::uint64_t b = mix64(key ^ 0x5851f42d4c957f2dULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return RandomEngine(seq);
}

inline RandomEngine make_stream(std::uint64_t seed, std::string_view key) {
  return make_stream(seed, fnv1a64(key));
}

// Uniform integer in [lo, hi] by rejection on the raw 64-bit output, so the
// sequence is identical across standard library implementations.
inline std::uint64_t uniform_int(RandomEngine& rng, std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return rng();
  const std::uint64_t n = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r > limit);
  return lo + r % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RandomEngine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mapstab

#endif  // MAPSTAB_RANDOM_HPP_
