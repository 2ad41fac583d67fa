#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrc {

using BigInt = mpz_class;

/// d = p^a with p prime and a >= 1.
struct PrimePower {
  std::uint64_t p = 0;
  unsigned a = 0;
  std::uint64_t value = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Nonnegative rational kept in lowest terms with a positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(BigInt numerator, BigInt denominator);

  const BigInt& numerator() const { return numerator_; }
  const BigInt& denominator() const { return denominator_; }
  bool is_integer() const { return denominator_ == 1; }

  /// "num/den", or just "num" when the denominator is 1.
  std::string to_string() const;
  /// Parses the to_string() form.
  static ExactRational parse(const std::string& text);

  /// Decimal approximation for humans only, e.g. "8.47657e79".
  std::string approx(int significant_digits = 6) const;

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.numerator_ == b.numerator_ && a.denominator_ == b.denominator_;
  }
  friend bool operator<(const ExactRational& a, const ExactRational& b) {
    return a.numerator_ * b.denominator_ < b.numerator_ * a.denominator_;
  }

 private:
  BigInt numerator_ = 0;
  BigInt denominator_ = 1;
};

std::uint64_t gcd_set(std::span<const std::uint64_t> values);

bool is_prime(std::uint64_t n);

/// Distinct prime factors in increasing order; n >= 1.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Returns (p, a) with d = p^a, or nothing when d is not a prime power.
std::optional<PrimePower> prime_power_decompose(std::uint64_t d);

/// Largest e with p^e | n.
unsigned valuation(std::uint64_t n, std::uint64_t p);

/// Exact binom(k+1, 2)^((k-1)k) / k^k. A minimal counterexample for k+1
/// runners has speed product below this value.
ExactRational product_bound(unsigned k);

/// The two integers compared by the final contradiction: an integer L
/// exceeds product_bound(k) iff L * k^k > binom(k+1,2)^((k-1)k).
BigInt product_bound_numerator_raw(unsigned k);
BigInt product_bound_denominator_raw(unsigned k);

/// Leading significant digits, rounded half up, and the decimal exponent of
/// a positive integer: 84765698...(80 digits) -> {"847657", 79}.
struct LeadingDigits {
  std::string digits;
  std::size_t exponent = 0;
};
LeadingDigits leading_digits(const BigInt& value, std::size_t count);

/// "d.ddddde<exp>" with the requested significant digits (rounded).
std::string scientific(const BigInt& value, int significant_digits = 6);

}  // namespace lrc
