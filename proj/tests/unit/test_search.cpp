#include <gtest/gtest.h>

#include <atomic>
#include <cstdint>
#include <memory>
#include <random>
#include <tuple>
#include <vector>

#include "lrc/conditions.hpp"
#include "lrc/covertab.hpp"
#include "lrc/oracle.hpp"
#include "lrc/search.hpp"

using lrc::ProfileMode;
using lrc::SearchOptions;
using lrc::Verdict;

namespace {

struct Instance {
  lrc::InstanceParams params;
  lrc::CoverTable table;
  lrc::ConditionProfile profile;
  std::vector<lrc::Candidate> candidates;

  Instance(unsigned k, std::uint64_t d, std::uint64_t c, ProfileMode mode = ProfileMode::Generic)
      : params(lrc::InstanceParams::make(k, d, c)),
        table(lrc::build_table(params)),
        profile(lrc::ConditionProfile::make(mode, params)),
        candidates(lrc::admissible_candidates(params, profile)) {}

  lrc::SearchOutcome run(const SearchOptions& options = {}) const {
    return lrc::find_bad_cover(table, candidates, profile, options);
  }
};

// Small instances the brute-force oracle can decide.
std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t, ProfileMode>> oracle_sized() {
  std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t, ProfileMode>> out;
  for (unsigned k : {3u, 4u, 5u})
    for (std::uint64_t d = 2; d <= 30; ++d) {
      if (!lrc::prime_power_decompose(d)) continue;
      for (std::uint64_t c = 1; c <= 3; ++c)
        if ((k + 1) * c * d <= 120 && (k + 1) * c * d / 2 >= k) out.emplace_back(k, d, c, ProfileMode::Generic);
    }
  for (std::uint64_t d : {2, 3, 4, 5}) out.emplace_back(8u, d, 1u, ProfileMode::NineRunner);
  return out;
}

std::size_t direct_column_count(const Instance& in, const lrc::SearchState& st, std::uint64_t j) {
  std::size_t n = 0;
  auto pool = st.available();
  for (std::size_t ci = 0; ci < in.candidates.size(); ++ci)
    if (lrc::bits::test(pool, ci) && lrc::covers(in.candidates[ci].v, j, in.params)) ++n;
  return n;
}

}  // namespace

TEST(Search, FiveSpeedsThirtyOneVerified) {
  Instance in(5, 31, 1);
  auto out = in.run();
  EXPECT_EQ(out.verdict, Verdict::Verified);
  EXPECT_FALSE(out.witness.has_value());
  EXPECT_GT(out.stats.nodes, 0u);
}

TEST(Search, AgreesWithOracle) {
  std::size_t verified = 0, found = 0;
  for (auto [k, d, c, mode] : oracle_sized()) {
    Instance in(k, d, c, mode);
    auto fast = in.run();
    auto slow = lrc::oracle::exhaustive_bad_cover(in.params, in.profile);
    ASSERT_EQ(fast.verdict, slow.verdict) << "k=" << k << " d=" << d << " c=" << c;
    if (fast.witness) EXPECT_TRUE(lrc::is_bad_cover(*fast.witness, in.params, in.profile));
    (fast.verdict == Verdict::Verified ? verified : found)++;
  }
  // Both outcomes must be exercised for the comparison to mean anything.
  EXPECT_GT(verified, 0u);
  EXPECT_GT(found, 0u);
}

TEST(Search, OptionTogglesKeepVerdict) {
  for (auto [k, d, c, mode] : oracle_sized()) {
    Instance in(k, d, c, mode);
    auto reference = in.run().verdict;
    for (int mask = 0; mask < 16; ++mask) {
      SearchOptions o;
      o.pivot_mrv = mask & 1;
      o.prune = mask & 2;
      o.learn_exclusions = mask & 4;
      o.shared_gains = mask & 8;
      ASSERT_EQ(in.run(o).verdict, reference) << "k=" << k << " d=" << d << " c=" << c << " mask=" << mask;
    }
  }
}

TEST(Search, LearningNeverAddsNodes) {
  bool strictly_fewer = false;
  for (auto [k, d, c] : {std::tuple{5u, 31u, 1u}, {4u, 13u, 1u}, {6u, 7u, 1u}, {4u, 11u, 2u}}) {
    Instance in(k, d, c);
    SearchOptions off;
    off.learn_exclusions = false;
    auto a = in.run();
    auto b = in.run(off);
    ASSERT_EQ(a.verdict, Verdict::Verified);
    ASSERT_EQ(b.verdict, Verdict::Verified);
    EXPECT_LE(a.stats.nodes, b.stats.nodes);
    strictly_fewer |= a.stats.nodes < b.stats.nodes;
  }
  EXPECT_TRUE(strictly_fewer);
}

TEST(Search, SharedGainsIsExact) {
  for (auto [k, d, c, mode] : {std::tuple{5u, 31u, 1u, ProfileMode::Generic},
                               std::tuple{8u, 13u, 1u, ProfileMode::NineRunner},
                               std::tuple{8u, 11u, 2u, ProfileMode::NineRunner}}) {
    Instance in(k, d, c, mode);
    SearchOptions plain;
    plain.shared_gains = false;
    auto a = in.run();
    auto b = in.run(plain);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    EXPECT_EQ(a.stats.prune_hits, b.stats.prune_hits);
    EXPECT_EQ(a.stats.exclusions, b.stats.exclusions);
    EXPECT_EQ(a.witness, b.witness);
  }
}

TEST(Search, Deterministic) {
  Instance in(8, 13, 1, ProfileMode::NineRunner);
  auto a = in.run();
  auto b = in.run();
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  EXPECT_EQ(a.stats.prune_hits, b.stats.prune_hits);
}

TEST(Search, WorkersMatchSerial) {
  for (auto [k, d, c, mode] : {std::tuple{5u, 31u, 1u, ProfileMode::Generic},
                               std::tuple{3u, 5u, 1u, ProfileMode::Generic},
                               std::tuple{4u, 7u, 1u, ProfileMode::Generic},
                               std::tuple{8u, 11u, 1u, ProfileMode::NineRunner}}) {
    Instance in(k, d, c, mode);
    auto serial = in.run();
    for (unsigned workers : {2u, 3u}) {
      SearchOptions o;
      o.workers = workers;
      auto par = in.run(o);
      EXPECT_EQ(par.verdict, serial.verdict) << k << " " << d;
      EXPECT_EQ(par.witness, serial.witness) << k << " " << d;
      if (serial.verdict == Verdict::Verified) EXPECT_EQ(par.stats.nodes, serial.stats.nodes);
    }
  }
}

TEST(Search, TimeoutAborts) {
  Instance in(8, 37, 1, ProfileMode::NineRunner);
  SearchOptions o;
  o.timeout = std::chrono::milliseconds(1);
  auto out = in.run(o);
  EXPECT_EQ(out.verdict, Verdict::Aborted);
  EXPECT_EQ(out.abort_reason, "timeout");
  EXPECT_FALSE(out.witness.has_value());
}

TEST(Search, CancelAborts) {
  Instance in(8, 37, 1, ProfileMode::NineRunner);
  std::atomic<bool> cancel{true};
  SearchOptions o;
  o.cancel = &cancel;
  auto out = in.run(o);
  EXPECT_EQ(out.verdict, Verdict::Aborted);
  EXPECT_EQ(out.abort_reason, "cancelled");
}

TEST(Search, ProgressReportsEveryBranch) {
  Instance in(5, 31, 1);
  std::size_t calls = 0, branches = 0;
  SearchOptions o;
  o.progress = [&](const lrc::ProgressEvent& e) {
    ++calls;
    branches = e.branches;
  };
  in.run(o);
  EXPECT_GT(calls, 0u);
  EXPECT_EQ(calls, branches);
}

TEST(Pivot, MatchesColumnScan) {
  Instance in(8, 31, 1, ProfileMode::NineRunner);
  lrc::SearchContext ctx(in.table, in.candidates, in.profile);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    lrc::SearchState st(ctx);
    unsigned depth = static_cast<unsigned>(rng() % 6);
    for (unsigned i = 0; i < depth && !st.complete(); ++i) {
      std::vector<std::uint32_t> pool;
      lrc::bits::for_each_set(st.available(), [&](std::size_t ci) { pool.push_back(static_cast<std::uint32_t>(ci)); });
      if (pool.empty()) break;
      st.push(pool[rng() % pool.size()]);
    }
    if (st.complete()) continue;
    std::uint64_t best = 0;
    std::size_t best_count = SIZE_MAX;
    for (std::uint64_t j = 1; j <= in.params.half; ++j) {
      if (lrc::bits::test(st.covered(), j - 1)) continue;
      std::size_t n = direct_column_count(in, st, j);
      if (n < best_count) {
        best_count = n;
        best = j;
      }
    }
    EXPECT_EQ(lrc::select_pivot(st, ctx), best);
    std::uint64_t first = 1;
    while (lrc::bits::test(st.covered(), first - 1)) ++first;
    EXPECT_EQ(lrc::first_uncovered(st), first);
  }
}

TEST(Prune, MatchesDefinition) {
  Instance in(8, 31, 1, ProfileMode::NineRunner);
  lrc::SearchContext ctx(in.table, in.candidates, in.profile);
  std::mt19937_64 rng(9);
  std::size_t hopeless_seen = 0, alive_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    lrc::SearchState st(ctx);
    unsigned depth = static_cast<unsigned>(rng() % 8);
    for (unsigned i = 0; i < depth; ++i) {
      std::vector<std::uint32_t> pool;
      lrc::bits::for_each_set(st.available(), [&](std::size_t ci) { pool.push_back(static_cast<std::uint32_t>(ci)); });
      if (pool.empty()) break;
      st.push(pool[rng() % pool.size()]);
    }
    std::vector<std::uint32_t> pool;
    lrc::bits::for_each_set(st.available(), [&](std::size_t ci) { pool.push_back(static_cast<std::uint32_t>(ci)); });
    if (pool.empty()) continue;
    std::uint32_t x = pool[rng() % pool.size()];

    st.push(x);
    std::size_t u = st.uncovered_count();
    std::size_t slots = in.params.k - st.depth();
    std::size_t s = 0;
    lrc::bits::for_each_set(st.available(), [&](std::size_t ci) {
      std::size_t gain = 0;
      for (std::uint64_t j = 1; j <= in.params.half; ++j)
        gain += !lrc::bits::test(st.covered(), j - 1) && lrc::covers(in.candidates[ci].v, j, in.params);
      s = std::max(s, gain);
    });
    bool expected = u > 0 && s * slots < u;
    st.pop();
    bool got = lrc::prune_extension(st, x, ctx);
    EXPECT_EQ(got, expected);
    (got ? hopeless_seen : alive_seen)++;
  }
  EXPECT_GT(hopeless_seen, 0u);
  EXPECT_GT(alive_seen, 0u);
}

TEST(Prune, LastSlot) {
  Instance in(3, 5, 1);  // witness {1, 3, 4} exists
  lrc::SearchContext ctx(in.table, in.candidates, in.profile);
  auto index_of = [&](std::uint64_t v) {
    for (std::uint32_t i = 0; i < in.candidates.size(); ++i)
      if (in.candidates[i].v == v) return i;
    return UINT32_MAX;
  };
  lrc::SearchState st(ctx);
  st.push(index_of(1));
  st.push(index_of(3));
  EXPECT_FALSE(lrc::prune_extension(st, index_of(4), ctx));  // completes the cover
  EXPECT_TRUE(lrc::prune_extension(st, index_of(2), ctx));
}

TEST(State, ExclusionsAreScopedToDepth) {
  Instance in(8, 31, 1, ProfileMode::NineRunner);
  lrc::SearchContext ctx(in.table, in.candidates, in.profile);
  lrc::SearchState st(ctx);
  st.push(0);
  auto before = std::vector<lrc::bits::Word>(st.available().begin(), st.available().end());
  st.learn_exclusion(5);
  EXPECT_FALSE(lrc::bits::test(st.available(), 5));
  st.push(7);
  EXPECT_FALSE(lrc::bits::test(st.available(), 5));
  st.pop();
  EXPECT_FALSE(lrc::bits::test(st.available(), 5));
  st.pop();
  st.push(0);
  EXPECT_TRUE(std::equal(before.begin(), before.end(), st.available().begin()));
}

TEST(State, CoverageGrowsAndPoolsShrink) {
  Instance in(8, 17, 3, ProfileMode::NineRunner);
  lrc::SearchContext ctx(in.table, in.candidates, in.profile);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    lrc::SearchState st(ctx);
    while (st.depth() < in.params.k) {
      std::vector<lrc::bits::Word> cov(st.covered().begin(), st.covered().end());
      std::vector<lrc::bits::Word> pool(st.available().begin(), st.available().end());
      std::vector<std::uint32_t> idx;
      lrc::bits::for_each_set(st.available(), [&](std::size_t ci) { idx.push_back(static_cast<std::uint32_t>(ci)); });
      if (idx.empty()) break;
      st.push(idx[rng() % idx.size()]);
      for (std::size_t w = 0; w < cov.size(); ++w) ASSERT_EQ(cov[w] & ~st.covered()[w], 0u);
      for (std::size_t w = 0; w < pool.size(); ++w) ASSERT_EQ(st.available()[w] & ~pool[w], 0u);
      // Every chosen tuple respects the caps.
      auto speeds = st.chosen_speeds();
      ASSERT_TRUE(lrc::satisfies_conditions(lrc::pad_tuple(speeds, in.params.k), in.params, in.profile));
    }
  }
}
