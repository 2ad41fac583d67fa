#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrc/conditions.hpp"
#include "lrc/covertab.hpp"
#include "lrc/numtheory.hpp"
#include "lrc/search.hpp"

// Brute-force references. They share no code with the search engine beyond
// covers() and the direct condition checks, and stay deliberately naive.
namespace lrc::oracle {

inline constexpr std::uint64_t kMaxOracleHalf = 80;
inline constexpr std::uint64_t kMaxOracleSubsets = 200'000'000;

/// Enumerates every subset of at most k speeds from 1..half (lexicographic,
/// depth first) and checks each directly. Throws ResourceError when
/// half > kMaxOracleHalf or the subset count exceeds kMaxOracleSubsets.
SearchOutcome exhaustive_bad_cover(const InstanceParams& params, const ConditionProfile& profile);

/// Smallest t in 0..M-1 with ||t v / M|| >= 1/(k+1) for every v in tuple,
/// i.e. min(t v mod M, M - t v mod M) >= c d. The empty tuple returns 1.
std::optional<std::uint64_t> modular_lonely_time(std::span<const std::uint64_t> tuple, const InstanceParams& params);

struct LonelyResult {
  bool holds = false;
  std::optional<ExactRational> witness;  // smallest lonely time in [0, 1)
};

inline constexpr std::uint64_t kMaxSpeedSum = 10'000;

/// Decides whether some real t has ||t v|| >= 1/(k+1) for every speed, k the
/// number of speeds, using exact arithmetic.
///
/// The allowed set is closed and 1-periodic. If it is nonempty, each of its
/// components starts where some speed v leaves its forbidden interval, i.e.
/// at t v = m + 1/(k+1). Testing t = (m + 1/(k+1)) / v for every speed v and
/// m in 0..v-1 therefore decides the question, and the smallest passing t is
/// the smallest lonely time in [0, 1).
///
/// Speeds must be distinct and positive with sum at most kMaxSpeedSum.
LonelyResult lr_holds(std::span<const std::uint64_t> speeds);

}  // namespace lrc::oracle
