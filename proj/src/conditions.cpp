#include "lrc/conditions.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "lrc/errors.hpp"

namespace lrc {

std::string to_string(ProfileMode mode) { return mode == ProfileMode::NineRunner ? "nine" : "generic"; }

ProfileMode parse_profile_mode(const std::string& text) {
  if (text == "nine") return ProfileMode::NineRunner;
  if (text == "generic") return ProfileMode::Generic;
  throw UsageError("unknown profile '" + text + "' (expected generic or nine)");
}

ProfileMode default_profile_mode(unsigned k) { return k == 8 ? ProfileMode::NineRunner : ProfileMode::Generic; }

ConditionProfile ConditionProfile::make(ProfileMode mode, const InstanceParams& params) {
  ConditionProfile profile;
  profile.mode_ = mode;
  profile.k_ = params.k;
  profile.primes_ = params.modulus_primes;
  profile.prime_caps_.assign(params.modulus_primes.size(), params.k - 2);
  profile.valuation_cap_ = params.divisor.a - 1;
  if (mode == ProfileMode::NineRunner) {
    if (params.k != 8) throw UsageError("nine-runner profile requires k = 8, got k = " + std::to_string(params.k));
    if (params.modulus % 9 != 0) throw UsageError("nine-runner profile requires 9 | M");
    profile.three_cap_ = 5;
    profile.nine_cap_ = 4;
  }
  return profile;
}

void TupleCounters::add(const Candidate& cand) {
  for (std::size_t i = 0; i < per_prime.size(); ++i)
    if (cand.shares >> i & 1) ++per_prime[i];
  div3 += cand.div3;
  div9 += cand.div9;
  total_valp += cand.valp;
  ++size;
}

void TupleCounters::remove(const Candidate& cand) {
  for (std::size_t i = 0; i < per_prime.size(); ++i)
    if (cand.shares >> i & 1) --per_prime[i];
  div3 -= cand.div3;
  div9 -= cand.div9;
  total_valp -= cand.valp;
  --size;
}

bool admits(const TupleCounters& counters, const Candidate& cand, const ConditionProfile& profile) {
  auto caps = profile.prime_caps();
  for (std::size_t i = 0; i < caps.size(); ++i)
    if ((cand.shares >> i & 1) && counters.per_prime[i] + 1 > caps[i]) return false;
  if (profile.three_cap() && cand.div3 && counters.div3 + 1 > *profile.three_cap()) return false;
  if (profile.nine_cap() && cand.div9 && counters.div9 + 1 > *profile.nine_cap()) return false;
  return counters.total_valp + cand.valp <= profile.valuation_cap();
}

bool equivalent_gcd_check(std::span<const std::uint64_t> tuple, std::uint64_t modulus) {
  for (std::size_t skip = 0; skip < tuple.size(); ++skip) {
    std::uint64_t g = modulus;
    for (std::size_t i = 0; i < tuple.size(); ++i)
      if (i != skip) g = std::gcd(g, tuple[i]);
    if (g != 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> pad_tuple(std::span<const std::uint64_t> subset, unsigned k) {
  if (subset.size() > k) throw UsageError("pad_tuple: subset larger than k");
  std::vector<std::uint64_t> out(subset.begin(), subset.end());
  out.resize(k, 1);
  return out;
}

bool satisfies_conditions(std::span<const std::uint64_t> tuple, const InstanceParams& params,
                          const ConditionProfile& profile) {
  if (!equivalent_gcd_check(tuple, params.modulus)) return false;
  if (profile.three_cap()) {
    auto n3 = std::count_if(tuple.begin(), tuple.end(), [](auto v) { return v % 3 == 0; });
    if (static_cast<unsigned>(n3) > *profile.three_cap()) return false;
  }
  if (profile.nine_cap()) {
    auto n9 = std::count_if(tuple.begin(), tuple.end(), [](auto v) { return v % 9 == 0; });
    if (static_cast<unsigned>(n9) > *profile.nine_cap()) return false;
  }
  std::uint64_t product = 1 % params.d;
  for (auto v : tuple) product = static_cast<std::uint64_t>(static_cast<unsigned __int128>(product) * (v % params.d) % params.d);
  return product != 0;
}

bool is_bad_cover(std::span<const std::uint64_t> subset, const InstanceParams& params,
                  const ConditionProfile& profile) {
  if (subset.empty() || subset.size() > params.k) return false;
  std::set<std::uint64_t> distinct(subset.begin(), subset.end());
  if (distinct.size() != subset.size()) return false;
  if (*distinct.begin() < 1 || *distinct.rbegin() > params.half) return false;
  if (!satisfies_conditions(pad_tuple(subset, params.k), params, profile)) return false;
  for (std::uint64_t j = 1; j <= params.half; ++j) {
    bool hit = std::any_of(subset.begin(), subset.end(), [&](auto v) { return covers(v, j, params); });
    if (!hit) return false;
  }
  return true;
}

}  // namespace lrc
