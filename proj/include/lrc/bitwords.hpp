#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

// Word-level helpers for fixed-width bit vectors stored as contiguous
// 64-bit words. Bit i lives in word i/64 at position i%64.
namespace lrc::bits {

using Word = std::uint64_t;

constexpr std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

inline void set(std::span<Word> w, std::size_t i) { w[i >> 6] |= Word{1} << (i & 63); }
inline void clear(std::span<Word> w, std::size_t i) { w[i >> 6] &= ~(Word{1} << (i & 63)); }
inline bool test(std::span<const Word> w, std::size_t i) { return (w[i >> 6] >> (i & 63)) & 1; }

inline std::size_t popcount(std::span<const Word> w) {
  std::size_t n = 0;
  for (Word x : w) n += static_cast<std::size_t>(std::popcount(x));
  return n;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return n;
}

inline std::size_t popcount_andnot(std::span<const Word> a, std::span<const Word> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & ~b[i]));
  return n;
}

/// Mask with the low nbits set across words_for(nbits) words.
inline void fill_prefix(std::span<Word> w, std::size_t nbits) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::size_t lo = i * 64;
    if (nbits >= lo + 64) {
      w[i] = ~Word{0};
    } else if (nbits > lo) {
      w[i] = (Word{1} << (nbits - lo)) - 1;
    } else {
      w[i] = 0;
    }
  }
}

/// Calls f(index) for every set bit in ascending order.
template <typename F>
inline void for_each_set(std::span<const Word> w, F&& f) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    Word x = w[i];
    while (x) {
      f(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
}

}  // namespace lrc::bits
