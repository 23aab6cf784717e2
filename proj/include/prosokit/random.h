// include/prosokit/random.h

// Copyright 2026  The prosokit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSOKIT_RANDOM_H_
#define PROSOKIT_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace prosokit {

/// Seeded generator with platform-independent distributions.
///
/// std::mt19937_64's output sequence is fixed by the standard but the
/// std::*_distribution classes are not, so the distributions are written out
/// here to keep seeded artifacts identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(Mix(seed)) {}

  /// Independent stream for (seed, stream), e.g. a line index or utt id.
  static Rng ForStream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(Mix(seed) ^ Mix(stream + 0x632BE59BD9B4E019ULL));
  }
  static Rng ForStream(std::uint64_t seed, std::string_view key) {
    // FNV-1a
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : key) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return ForStream(seed, h);
  }

  std::uint64_t Next() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(Next());  // full range
    const std::uint64_t limit = span * (UINT64_MAX / span);
    std::uint64_t v;
    do v = Next(); while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double Uniform01() { return (Next() >> 11) * 0x1.0p-53; }

  bool Bernoulli(double p) { return Uniform01() < p; }

  /// Standard normal via Box-Muller.
  double Gaussian();

 private:
  static std::uint64_t Mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace prosokit

#endif  // PROSOKIT_RANDOM_H_
