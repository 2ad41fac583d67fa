#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrc/covertab.hpp"

namespace lrc {

enum class ProfileMode { Generic, NineRunner };

std::string to_string(ProfileMode mode);
/// Accepts "generic" and "nine".
ProfileMode parse_profile_mode(const std::string& text);
/// nine for k = 8, generic otherwise.
ProfileMode default_profile_mode(unsigned k);

/// Divisibility caps on a tuple of k speeds mod M.
///
/// Every (k-1)-subset S must have gcd(S u {M}) = 1. A prime q | M divides
/// that gcd iff q divides every member of S, so the condition is exactly "at
/// most k-2 members divisible by q" for each prime q | M.
///
/// The product must avoid d = p^a: total p-adic valuation at most a-1.
///
/// The nine-runner profile (k = 8 only) also allows at most 5 members divisible
/// by 3 and at most 4 divisible by 9.
class ConditionProfile {
 public:
  /// Throws UsageError for the nine-runner profile with k != 8, or when 9 does
  /// not divide M (the 3/9 attributes would not survive folding v -> M-v).
  static ConditionProfile make(ProfileMode mode, const InstanceParams& params);

  ProfileMode mode() const { return mode_; }
  unsigned k() const { return k_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const unsigned> prime_caps() const { return prime_caps_; }
  std::optional<unsigned> three_cap() const { return three_cap_; }
  std::optional<unsigned> nine_cap() const { return nine_cap_; }
  unsigned valuation_cap() const { return valuation_cap_; }

 private:
  ProfileMode mode_ = ProfileMode::Generic;
  unsigned k_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<unsigned> prime_caps_;
  std::optional<unsigned> three_cap_;
  std::optional<unsigned> nine_cap_;
  unsigned valuation_cap_ = 0;
};

/// Running counts over a partial tuple.
struct TupleCounters {
  std::vector<unsigned> per_prime;  // aligned with InstanceParams::modulus_primes
  unsigned div3 = 0;
  unsigned div9 = 0;
  unsigned total_valp = 0;
  unsigned size = 0;

  TupleCounters() = default;
  explicit TupleCounters(const InstanceParams& params) : per_prime(params.modulus_primes.size(), 0) {}

  void add(const Candidate& cand);
  void remove(const Candidate& cand);

  friend bool operator==(const TupleCounters&, const TupleCounters&) = default;
};

/// True iff adding cand keeps every cap satisfied.
bool admits(const TupleCounters& counters, const Candidate& cand, const ConditionProfile& profile);

/// Direct form of the subset-gcd condition: every (|tuple|-1)-subset S has
/// gcd(S u {M}) = 1.
bool equivalent_gcd_check(std::span<const std::uint64_t> tuple, std::uint64_t modulus);

/// Pads a folded subset to k entries with the speed 1, which is coprime to M
/// and contributes nothing to any cap. A subset of at most k distinct speeds
/// meets the conditions iff its padding does, and any k-tuple meeting them
/// reduces to its distinct subset, so searching subsets loses nothing.
std::vector<std::uint64_t> pad_tuple(std::span<const std::uint64_t> subset, unsigned k);

/// Direct evaluation of the divisibility conditions on a full k-tuple: subset
/// gcds, the 3/9 counts where the profile has them, and prod(tuple) mod d != 0.
bool satisfies_conditions(std::span<const std::uint64_t> tuple, const InstanceParams& params,
                          const ConditionProfile& profile);

/// Direct check that subset is a bad cover: at most k distinct speeds in
/// 1..half, padded tuple satisfies the conditions, and every target 1..half is
/// covered. Uses only covers(), no tables.
bool is_bad_cover(std::span<const std::uint64_t> subset, const InstanceParams& params,
                  const ConditionProfile& profile);

}  // namespace lrc
