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

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace poqk {

/// Fixed-width bitstring packed into a 64-bit word. Bit i of the string is
/// (word >> i) & 1, so bit 0 is the least significant bit of the word.
struct Bits {
  std::uint64_t word = 0;
  int width = 0;

  Bits() = default;
  Bits(std::uint64_t w, int n) : word(w), width(n) {
    if (n < 0 || n > 64) throw std::invalid_argument("Bits: width out of range");
    if (n < 64) word &= mask_of(n);
  }

  static std::uint64_t mask_of(int n) {
    return n >= 64 ? ~0ULL : ((1ULL << n) - 1);
  }
  static Bits zeros(int n) { return Bits(0, n); }
  static Bits ones(int n) { return Bits(mask_of(n), n); }

  int bit(int i) const {
    if (i < 0 || i >= width) throw std::out_of_range("Bits::bit");
    return static_cast<int>((word >> i) & 1);
  }
  Bits with_bit(int i, int v) const {
    Bits b = *this;
    if (i < 0 || i >= width) throw std::out_of_range("Bits::with_bit");
    if (v)
      b.word |= (1ULL << i);
    else
      b.word &= ~(1ULL << i);
    return b;
  }

  int popcount() const { return std::popcount(word); }
  int parity() const { return popcount() & 1; }
  /// GF(2) inner product with another string of the same width.
  int dot(const Bits& o) const {
    require_same_width(o);
    return std::popcount(word & o.word) & 1;
  }

  Bits operator^(const Bits& o) const {
    require_same_width(o);
    return Bits(word ^ o.word, width);
  }
  Bits operator&(const Bits& o) const {
    require_same_width(o);
    return Bits(word & o.word, width);
  }
  Bits operator|(const Bits& o) const {
    require_same_width(o);
    return Bits(word | o.word, width);
  }
  /// Bitwise complement within the declared width.
  Bits flipped() const { return Bits(~word & mask_of(width), width); }

  bool operator==(const Bits& o) const = default;
  bool is_zero() const { return word == 0; }

  /// Little-endian binary rendering: character k is bit k.
  std::string to_binary() const {
    std::string s(width, '0');
    for (int i = 0; i < width; ++i)
      if (bit(i)) s[i] = '1';
    return s;
  }
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    int nibbles = (width + 3) / 4;
    std::string s;
    for (int k = nibbles - 1; k >= 0; --k) s += digits[(word >> (4 * k)) & 0xf];
    return s.empty() ? "0" : s;
  }
  static Bits from_hex(const std::string& s, int width) {
    std::uint64_t w = 0;
    for (char c : s) {
      int d;
      if (c >= '0' && c <= '9')
        d = c - '0';
      else if (c >= 'a' && c <= 'f')
        d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        d = c - 'A' + 10;
      else
        throw std::invalid_argument("Bits::from_hex: bad digit");
      w = (w << 4) | static_cast<std::uint64_t>(d);
    }
    return Bits(w, width);
  }

  /// Concatenation: `o` occupies the high bits of the result.
  Bits concat(const Bits& o) const {
    if (width + o.width > 64) throw std::invalid_argument("Bits::concat: overflow");
    return Bits(word | (o.word << width), width + o.width);
  }
  Bits slice(int lo, int n) const {
    if (lo < 0 || n < 0 || lo + n > width) throw std::out_of_range("Bits::slice");
    return Bits(word >> lo, n);
  }

 private:
  void require_same_width(const Bits& o) const {
    if (width != o.width) throw std::invalid_argument("Bits: width mismatch");
  }
};

}  // namespace poqk
