// Copyright 2026 The Combkit Authors
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

#include <cmath>
#include <complex>
#include <cstdint>

namespace combkit {

// Counter-based generator: output n is a pure function of (seed, n), so
// streams are identical across platforms and can be split by counter range.
// The mixer is the SplitMix64 finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start_counter = 0)
      : seed_(seed), ctr_(start_counter) {}

  std::uint64_t next_u64() { return value_at(seed_, ctr_++); }

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
  }

  // Standard normal via Box-Muller.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> cgauss() { return {gauss(), gauss()}; }

  std::uint64_t counter() const { return ctr_; }
  std::uint64_t seed() const { return seed_; }

  // Derives an independent stream for worker `k` of a parallel loop.
  static CounterRng substream(std::uint64_t seed, std::uint64_t k) {
    return CounterRng(value_at(seed ^ 0xA5A5A5A55A5A5A5AULL, k));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t ctr_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace combkit
