#include "lrc/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <string>

#include "lrc/errors.hpp"

namespace lrc::oracle {

namespace {

// Number of subsets of size 1..k from n elements, saturating.
std::uint64_t subset_count(std::uint64_t n, unsigned k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (unsigned r = 1; r <= k && r <= n; ++r) {
    binom = binom * (n - r + 1) / r;
    total += binom;
    if (total > kMaxOracleSubsets) return total;
  }
  return total;
}

struct Enumerator {
  const InstanceParams& params;
  const ConditionProfile& profile;
  std::vector<std::uint64_t> subset;
  std::uint64_t visited = 0;

  bool visit(std::uint64_t next) {
    for (std::uint64_t v = next; v <= params.half; ++v) {
      subset.push_back(v);
      ++visited;
      if (is_bad_cover(subset, params, profile)) return true;
      if (subset.size() < params.k && visit(v + 1)) return true;
      subset.pop_back();
    }
    return false;
  }
};

}  // namespace

SearchOutcome exhaustive_bad_cover(const InstanceParams& params, const ConditionProfile& profile) {
  if (params.half > kMaxOracleHalf)
    throw ResourceError("oracle refuses half = " + std::to_string(params.half) + " (limit " +
                        std::to_string(kMaxOracleHalf) + ")");
  auto subsets = subset_count(params.half, params.k);
  if (subsets > kMaxOracleSubsets)
    throw ResourceError("oracle refuses " + std::to_string(subsets) + "+ subsets (limit " +
                        std::to_string(kMaxOracleSubsets) + ")");

  auto start = std::chrono::steady_clock::now();
  Enumerator e{params, profile, {}, 0};
  SearchOutcome out;
  if (e.visit(1)) {
    out.verdict = Verdict::CounterexampleFound;
    out.witness = e.subset;
  } else {
    out.verdict = Verdict::Verified;
  }
  out.stats.nodes = e.visited;
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::optional<std::uint64_t> modular_lonely_time(std::span<const std::uint64_t> tuple, const InstanceParams& params) {
  if (tuple.empty()) return 1;
  const std::uint64_t m = params.modulus;
  for (std::uint64_t t = 0; t < m; ++t) {
    bool lonely = std::all_of(tuple.begin(), tuple.end(), [&](std::uint64_t v) {
      auto r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(t) * v % m);
      return std::min(r, m - r) >= params.threshold;
    });
    if (lonely) return t;
  }
  return std::nullopt;
}

LonelyResult lr_holds(std::span<const std::uint64_t> speeds) {
  if (speeds.empty()) throw UsageError("lr_holds: need at least one speed");
  std::set<std::uint64_t> distinct(speeds.begin(), speeds.end());
  if (distinct.size() != speeds.size()) throw UsageError("lr_holds: speeds must be distinct");
  if (*distinct.begin() == 0) throw UsageError("lr_holds: speeds must be positive");
  std::uint64_t sum = std::accumulate(speeds.begin(), speeds.end(), std::uint64_t{0});
  if (sum > kMaxSpeedSum) throw ResourceError("lr_holds: speed sum " + std::to_string(sum) + " exceeds limit");

  const std::uint64_t n = speeds.size() + 1;  // threshold 1/n
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;  // (num, den) of the smallest lonely t

  for (auto v : speeds) {
    for (std::uint64_t m = 0; m < v; ++m) {
      // t = (m n + 1) / (v n)
      const std::uint64_t num = m * n + 1;
      const std::uint64_t den = v * n;
      // ||t w|| >= 1/n  <=>  min(r, den - r) * n >= den with r = num w mod den
      bool lonely = std::all_of(speeds.begin(), speeds.end(), [&](std::uint64_t w) {
        std::uint64_t r = num * w % den;
        return std::min(r, den - r) * n >= den;
      });
      if (!lonely) continue;
      if (!best || num * best->second < best->first * den) best = {num, den};
    }
  }
  if (!best) return {false, std::nullopt};
  return {true, ExactRational(best->first, best->second)};
}

}  // namespace lrc::oracle
