#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lrc/bitwords.hpp"
#include "lrc/numtheory.hpp"

namespace lrc {

class ConditionProfile;

/// One verification instance: k speeds, certified divisor d = p^a and
/// multiplier c. Times and speeds live modulo M = (k+1)*c*d.
struct InstanceParams {
  unsigned k = 0;
  std::uint64_t d = 0;
  std::uint64_t c = 0;
  std::uint64_t modulus = 0;    // M = (k+1) c d
  std::uint64_t threshold = 0;  // c d; v covers j iff (v j mod M) is within threshold of 0
  std::uint64_t half = 0;       // floor(M/2); speeds and targets range over 1..half
  PrimePower divisor;
  std::vector<std::uint64_t> modulus_primes;  // distinct primes of M, ascending

  /// Validates k >= 3, d a prime power, c >= 1 and half >= k.
  static InstanceParams make(unsigned k, std::uint64_t d, std::uint64_t c);

  friend bool operator==(const InstanceParams&, const InstanceParams&) = default;
};

/// ||v j / M|| < 1/(k+1), evaluated on integers.
bool covers(std::uint64_t v, std::uint64_t j, const InstanceParams& params);

/// Speed residue with the divisibility attributes the conditions look at.
struct Candidate {
  std::uint64_t v = 0;
  bool div3 = false;
  bool div9 = false;
  unsigned valp = 0;              // min(valuation(v, p), a)
  std::uint32_t shares = 0;       // bit i set iff modulus_primes[i] divides v

  static Candidate make(std::uint64_t v, const InstanceParams& params);
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 30;

/// Coverage rows for every speed v in 1..half over targets j in 1..half.
/// Target j is stored at bit j-1. Folding v -> M-v and j -> M-j preserves
/// coverage, so the half ranges carry the full relation.
class CoverTable {
 public:
  const InstanceParams& params() const { return params_; }
  std::size_t words_per_row() const { return words_per_row_; }
  std::size_t targets() const { return params_.half; }

  std::span<const bits::Word> row(std::uint64_t v) const {
    return {words_.data() + (v - 1) * words_per_row_, words_per_row_};
  }
  bool covers_target(std::uint64_t v, std::uint64_t j) const { return bits::test(row(v), j - 1); }

  /// FNV-1a over the row words; identifies the table in run records.
  std::uint64_t checksum() const;

  std::span<const bits::Word> raw_words() const { return words_; }

 private:
  friend CoverTable build_table(const InstanceParams&, std::size_t);
  friend CoverTable load_table(const std::filesystem::path&, const InstanceParams&);

  InstanceParams params_;
  std::size_t words_per_row_ = 0;
  std::vector<bits::Word> words_;
};

/// Throws ResourceError when half rows of half bits exceed the budget.
CoverTable build_table(const InstanceParams& params, std::size_t memory_budget = kDefaultMemoryBudget);

/// Binary cache: header (magic, version, k, d, c, M), rows as little-endian
/// 64-bit words, FNV-1a trailer over everything before it.
void save_table(const CoverTable& table, const std::filesystem::path& path);
/// Throws FormatError on a bad header, mismatched parameters or checksum.
CoverTable load_table(const std::filesystem::path& path, const InstanceParams& params);

/// Speeds in 1..half not excluded on their own by the profile. v = 0 is never
/// a candidate: it makes the product divisible by d.
std::vector<Candidate> admissible_candidates(const InstanceParams& params, const ConditionProfile& profile);

}  // namespace lrc
