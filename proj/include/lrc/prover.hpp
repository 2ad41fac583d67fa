#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrc/numtheory.hpp"
#include "lrc/record.hpp"

namespace lrc {

/// A divisor d that must divide the speed product of any counterexample,
/// backed by a Verified run record for (k, d, c).
struct CertifiedEntry {
  std::uint64_t d = 0;
  std::uint64_t c = 0;
  std::string record_ref;  // content hash of the backing RunRecord

  friend bool operator==(const CertifiedEntry&, const CertifiedEntry&) = default;
};

enum class ProofVerdict { ProofComplete, Insufficient };
std::string to_string(ProofVerdict verdict);

struct Certificate {
  unsigned k = 0;
  ExactRational bound;
  std::vector<CertifiedEntry> entries;
  BigInt lcm = 1;
  ProofVerdict verdict = ProofVerdict::Insufficient;
  // The comparison carried out: lcm * k^k against binom(k+1,2)^((k-1)k).
  BigInt lhs;
  BigInt rhs;
  std::optional<ExactRational> deficit;  // bound / lcm when Insufficient

  friend bool operator==(const Certificate& a, const Certificate& b) {
    return a.k == b.k && a.bound == b.bound && a.entries == b.entries && a.lcm == b.lcm && a.verdict == b.verdict &&
           a.lhs == b.lhs && a.rhs == b.rhs && a.deficit == b.deficit;
  }
};

/// Checks every entry against its record (Verified, same k, d, c), checks the
/// divisors are pairwise coprime prime powers, and compares their product
/// with the product bound exactly. Throws ProofError naming the offending
/// entry or pair. Equality with the bound is Insufficient.
Certificate assemble_certificate(std::span<const CertifiedEntry> entries, unsigned k, const RecordStore& records);

/// Deterministic JSON text with stable key order; integers in decimal.
std::string format_certificate(const Certificate& cert);
/// Inverse of format_certificate. Throws FormatError.
Certificate parse_certificate(const std::string& text);
/// One line per entry: "<record hash>  k=<k> d=<d> c=<c>".
std::string format_record_hashes(const Certificate& cert);

/// The 42 prime powers certified for nine runners with the smallest
/// multiplier c that verified for each: 25 -> 5; 17, 19 -> 3;
/// 64, 23, 29, 41 -> 2; every other entry -> 1.
std::vector<std::pair<std::uint64_t, std::uint64_t>> nine_runner_divisors();

}  // namespace lrc
