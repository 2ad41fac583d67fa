#include "lrc/numtheory.hpp"

#include <numeric>

#include "lrc/errors.hpp"

namespace lrc {

ExactRational::ExactRational(BigInt numerator, BigInt denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_ <= 0) throw UsageError("ExactRational: denominator must be positive");
  if (numerator_ < 0) throw UsageError("ExactRational: numerator must be nonnegative");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), numerator_.get_mpz_t(), denominator_.get_mpz_t());
  if (g > 1) {
    numerator_ /= g;
    denominator_ /= g;
  }
  if (numerator_ == 0) denominator_ = 1;
}

std::string ExactRational::to_string() const {
  if (denominator_ == 1) return numerator_.get_str();
  return numerator_.get_str() + "/" + denominator_.get_str();
}

ExactRational ExactRational::parse(const std::string& text) {
  auto slash = text.find('/');
  BigInt num, den = 1;
  bool ok = slash == std::string::npos
                ? num.set_str(text, 10) == 0
                : num.set_str(text.substr(0, slash), 10) == 0 && den.set_str(text.substr(slash + 1), 10) == 0;
  if (!ok || text.empty()) throw FormatError("not an exact rational: '" + text + "'");
  return ExactRational(num, den);
}

std::string ExactRational::approx(int significant_digits) const {
  if (numerator_ == 0) return "0";
  // Scale so the integer quotient carries a few guard digits, then reuse the
  // integer formatter and shift the exponent back.
  std::size_t num_digits = mpz_sizeinbase(numerator_.get_mpz_t(), 10);
  std::size_t den_digits = mpz_sizeinbase(denominator_.get_mpz_t(), 10);
  long shift = static_cast<long>(den_digits) - static_cast<long>(num_digits) + significant_digits + 2;
  if (shift < 0) shift = 0;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift));
  BigInt q = numerator_ * scale / denominator_;
  auto lead = leading_digits(q, static_cast<std::size_t>(significant_digits));
  long exponent = static_cast<long>(lead.exponent) - shift;
  std::string out = lead.digits.substr(0, 1);
  if (lead.digits.size() > 1) out += "." + lead.digits.substr(1);
  return out + "e" + std::to_string(exponent);
}

std::uint64_t gcd_set(std::span<const std::uint64_t> values) {
  if (values.empty()) throw UsageError("gcd_set: empty list");
  std::uint64_t g = 0;
  for (auto v : values) g = std::gcd(g, v);
  return g;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  if (n == 0) throw UsageError("prime_factors: n must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f != 0) continue;
    out.push_back(f);
    while (n % f == 0) n /= f;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::optional<PrimePower> prime_power_decompose(std::uint64_t d) {
  if (d < 2) throw UsageError("prime_power_decompose: d must be >= 2, got " + std::to_string(d));
  auto factors = prime_factors(d);
  if (factors.size() != 1) return std::nullopt;
  PrimePower pp{factors.front(), valuation(d, factors.front()), d};
  return pp;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw UsageError("valuation: n = 0 has infinite valuation");
  if (p < 2) throw UsageError("valuation: p must be prime");
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

BigInt product_bound_numerator_raw(unsigned k) {
  if (k < 3) throw UsageError("product_bound: k must be >= 3");
  BigInt out;
  unsigned long binom = static_cast<unsigned long>(k + 1) * k / 2;
  mpz_ui_pow_ui(out.get_mpz_t(), binom, static_cast<unsigned long>(k - 1) * k);
  return out;
}

BigInt product_bound_denominator_raw(unsigned k) {
  if (k < 3) throw UsageError("product_bound: k must be >= 3");
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), k, k);
  return out;
}

ExactRational product_bound(unsigned k) {
  return ExactRational(product_bound_numerator_raw(k), product_bound_denominator_raw(k));
}

LeadingDigits leading_digits(const BigInt& value, std::size_t count) {
  if (value <= 0) throw UsageError("leading_digits: value must be positive");
  if (count == 0) throw UsageError("leading_digits: count must be positive");
  std::string s = value.get_str();
  std::size_t exponent = s.size() - 1;
  if (s.size() <= count) return {s, exponent};
  std::string head = s.substr(0, count);
  if (s[count] >= '5') {
    std::size_t i = count;
    while (i > 0 && head[i - 1] == '9') head[--i] = '0';
    if (i == 0) {
      head.insert(head.begin(), '1');
      head.pop_back();
      ++exponent;
    } else {
      ++head[i - 1];
    }
  }
  return {head, exponent};
}

std::string scientific(const BigInt& value, int significant_digits) {
  auto lead = leading_digits(value, static_cast<std::size_t>(significant_digits));
  std::string out = lead.digits.substr(0, 1);
  if (lead.digits.size() > 1) out += "." + lead.digits.substr(1);
  return out + "e" + std::to_string(lead.exponent);
}

}  // namespace lrc
