#pragma once

// Schoolbook decimal integers for tests. Deliberately independent of GMP so
// exact values computed by the library can be checked by a second route.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace lrc::testing {

class Decimal {
 public:
  explicit Decimal(std::uint64_t v = 0) {
    do {
      digits_.push_back(static_cast<std::uint8_t>(v % 10));
      v /= 10;
    } while (v);
  }

  Decimal& operator*=(std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto& d : digits_) {
      std::uint64_t x = d * m + carry;
      d = static_cast<std::uint8_t>(x % 10);
      carry = x / 10;
    }
    while (carry) {
      digits_.push_back(static_cast<std::uint8_t>(carry % 10));
      carry /= 10;
    }
    trim();
    return *this;
  }

  friend Decimal operator*(Decimal a, const Decimal& b) {
    std::vector<std::uint32_t> acc(a.digits_.size() + b.digits_.size(), 0);
    for (std::size_t i = 0; i < a.digits_.size(); ++i)
      for (std::size_t j = 0; j < b.digits_.size(); ++j) acc[i + j] += a.digits_[i] * b.digits_[j];
    Decimal out;
    out.digits_.assign(acc.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      std::uint64_t x = acc[i] + carry;
      out.digits_[i] = static_cast<std::uint8_t>(x % 10);
      carry = x / 10;
    }
    while (carry) {
      out.digits_.push_back(static_cast<std::uint8_t>(carry % 10));
      carry /= 10;
    }
    out.trim();
    return out;
  }

  static Decimal power(std::uint64_t base, unsigned exp) {
    Decimal out(1);
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
  }

  std::string str() const {
    std::string s;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) s.push_back(static_cast<char>('0' + *it));
    return s;
  }

  friend bool operator<(const Decimal& a, const Decimal& b) {
    if (a.digits_.size() != b.digits_.size()) return a.digits_.size() < b.digits_.size();
    return std::lexicographical_compare(a.digits_.rbegin(), a.digits_.rend(), b.digits_.rbegin(), b.digits_.rend());
  }
  friend bool operator==(const Decimal& a, const Decimal& b) { return a.digits_ == b.digits_; }

 private:
  void trim() {
    while (digits_.size() > 1 && digits_.back() == 0) digits_.pop_back();
  }
  std::vector<std::uint8_t> digits_;  // little-endian
};

}  // namespace lrc::testing
