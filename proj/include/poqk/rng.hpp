// Copyright 2026 The poqklab authors
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

#pragma once

#include <cstdint>
#include <random>

#include "poqk/bits.hpp"

namespace poqk {

/// splitmix64 step; also used to derive independent child seeds.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded generator. All randomness in the library flows through explicit
/// Rng instances; parallel trials must use independent instances derived
/// with child_seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Child seed for trial `index`: one splitmix64 step of (seed, index).
  /// Documented so reports can be reproduced outside this library.
  static std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master ^ (index * 0x9e3779b97f4a7c15ULL);
    return splitmix64(x);
  }

  std::uint64_t u64() { return eng_(); }
  /// Uniform real in [0,1).
  double real() {
    return std::generate_canonical<double, 53>(eng_);
  }
  int bit() { return static_cast<int>(eng_() & 1); }
  Bits bits(int width) {
    std::uint64_t w = eng_();
    if (width < 64) w &= Bits::mask_of(width);
    return Bits(w, width);
  }
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    return d(eng_);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace poqk
