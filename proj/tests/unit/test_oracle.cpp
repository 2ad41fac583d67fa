#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "lrc/errors.hpp"
#include "lrc/oracle.hpp"

using lrc::BigInt;
using lrc::ExactRational;
using lrc::InstanceParams;
namespace oracle = lrc::oracle;

namespace {

// Exact check that t is lonely: ||t v|| >= 1/(k+1) for every v.
bool lonely_at(const ExactRational& t, const std::vector<std::uint64_t>& speeds) {
  const BigInt k1 = static_cast<unsigned long>(speeds.size() + 1);
  for (std::uint64_t v : speeds) {
    BigInt num = t.numerator() * static_cast<unsigned long>(v);
    BigInt r = num % t.denominator();
    BigInt dist = std::min<BigInt>(r, t.denominator() - r);
    if (dist * k1 < t.denominator()) return false;
  }
  return true;
}

}  // namespace

TEST(ModularLonelyTime, Examples) {
  auto p = InstanceParams::make(8, 31, 1);
  std::vector<std::uint64_t> one{1};
  EXPECT_EQ(oracle::modular_lonely_time(one, p), 31u);
  EXPECT_EQ(oracle::modular_lonely_time({}, p), 1u);
  // The unit speed forces t >= 31, and 2 * 31 = 62 is far from 0.
  std::vector<std::uint64_t> pair{1, 2};
  EXPECT_EQ(oracle::modular_lonely_time(pair, p), 31u);
}

TEST(ModularLonelyTime, AbsentIffFoldedTupleCovers) {
  std::mt19937_64 rng(2);
  auto p = InstanceParams::make(4, 7, 1);  // M = 35
  std::size_t absent = 0;
  for (int i = 0; i < 3000; ++i) {
    std::vector<std::uint64_t> t;
    for (unsigned n = 0; n < 4; ++n) t.push_back(rng() % (p.modulus - 1) + 1);
    bool covers_all = true;
    for (std::uint64_t j = 1; j <= p.half && covers_all; ++j) {
      bool hit = false;
      for (std::uint64_t v : t) {
        std::uint64_t fv = std::min(v, p.modulus - v);
        hit |= lrc::covers(fv, j, p);
      }
      covers_all = hit;
    }
    auto lonely = oracle::modular_lonely_time(t, p);
    ASSERT_EQ(!lonely.has_value(), covers_all);
    absent += !lonely.has_value();
  }
  EXPECT_GT(absent, 0u);
}

TEST(LonelyRunner, Examples) {
  std::vector<std::uint64_t> tight{1, 2, 3, 4, 5, 6, 7, 8};
  auto r = oracle::lr_holds(tight);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->to_string(), "1/9");

  std::vector<std::uint64_t> single{3};
  r = oracle::lr_holds(single);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.witness->to_string(), "1/6");
}

TEST(LonelyRunner, Rejects) {
  EXPECT_THROW(oracle::lr_holds(std::vector<std::uint64_t>{}), lrc::UsageError);
  EXPECT_THROW(oracle::lr_holds(std::vector<std::uint64_t>{1, 1}), lrc::UsageError);
  EXPECT_THROW(oracle::lr_holds(std::vector<std::uint64_t>{0, 2}), lrc::UsageError);
  EXPECT_THROW(oracle::lr_holds(std::vector<std::uint64_t>{6000, 5000}), lrc::ResourceError);
}

TEST(LonelyRunner, WitnessIsLonelyAndMinimalOnGrid) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    std::set<std::uint64_t> s;
    std::size_t n = rng() % 5 + 1;
    while (s.size() < n) s.insert(rng() % 30 + 1);
    std::vector<std::uint64_t> speeds(s.begin(), s.end());
    auto r = oracle::lr_holds(speeds);
    ASSERT_TRUE(r.holds);
    ASSERT_TRUE(lonely_at(*r.witness, speeds));
    // No lonely time on a fine grid below the witness.
    const unsigned long grid = 2000;
    for (unsigned long g = 0; g < grid; ++g) {
      ExactRational t{BigInt(g), BigInt(grid)};
      if (!(t < *r.witness)) break;
      ASSERT_FALSE(lonely_at(t, speeds)) << t.to_string();
    }
  }
}

TEST(LonelyRunner, ScalingInvariance) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    std::set<std::uint64_t> s;
    std::size_t n = rng() % 4 + 1;
    while (s.size() < n) s.insert(rng() % 20 + 1);
    std::vector<std::uint64_t> speeds(s.begin(), s.end()), scaled;
    std::uint64_t lambda = rng() % 5 + 2;
    for (auto v : speeds) scaled.push_back(v * lambda);
    auto a = oracle::lr_holds(speeds);
    auto b = oracle::lr_holds(scaled);
    EXPECT_EQ(a.holds, b.holds);
    // Lonely times of the scaled set are the originals divided by lambda.
    ExactRational scaled_back(b.witness->numerator() * static_cast<unsigned long>(lambda), b.witness->denominator());
    EXPECT_TRUE(lonely_at(scaled_back, speeds));
  }
}

TEST(Exhaustive, CountsSubsetsAndRefuses) {
  auto p = InstanceParams::make(3, 2, 1);  // half = 4
  auto prof = lrc::ConditionProfile::make(lrc::ProfileMode::Generic, p);
  auto out = oracle::exhaustive_bad_cover(p, prof);
  // Nonempty subsets of 1..4 with at most 3 elements.
  EXPECT_EQ(out.verdict, lrc::Verdict::Verified);
  EXPECT_EQ(out.stats.nodes, 4u + 6 + 4);
  auto big = InstanceParams::make(8, 31, 1);
  EXPECT_THROW(oracle::exhaustive_bad_cover(big, lrc::ConditionProfile::make(lrc::ProfileMode::NineRunner, big)),
               lrc::ResourceError);
}

TEST(Exhaustive, WitnessIsLexicographicallyFirst) {
  auto p = InstanceParams::make(3, 5, 1);
  auto prof = lrc::ConditionProfile::make(lrc::ProfileMode::Generic, p);
  auto out = oracle::exhaustive_bad_cover(p, prof);
  ASSERT_EQ(out.verdict, lrc::Verdict::CounterexampleFound);
  EXPECT_TRUE(lrc::is_bad_cover(*out.witness, p, prof));
  EXPECT_TRUE(!oracle::modular_lonely_time(*out.witness, p).has_value());
}
