#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <numeric>
#include <tuple>

#include <unistd.h>

#include "lrc/conditions.hpp"
#include "lrc/covertab.hpp"
#include "lrc/errors.hpp"

using lrc::InstanceParams;

namespace {

// ||v j / M|| < 1/(k+1) with rationals cross-multiplied; no shortcuts.
bool dense_covers(std::uint64_t v, std::uint64_t j, std::uint64_t k, std::uint64_t m) {
  std::uint64_t r = (v * j) % m;
  std::uint64_t dist = std::min(r, m - r);
  return dist * (k + 1) < m;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lrc_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(InstanceParams, Derived) {
  auto p = InstanceParams::make(8, 31, 1);
  EXPECT_EQ(p.modulus, 279u);
  EXPECT_EQ(p.threshold, 31u);
  EXPECT_EQ(p.half, 139u);
  EXPECT_EQ(p.divisor.p, 31u);
  EXPECT_EQ(p.modulus_primes, (std::vector<std::uint64_t>{3, 31}));
  auto q = InstanceParams::make(8, 17, 3);
  EXPECT_EQ(q.modulus, 459u);
  EXPECT_EQ(q.threshold, 51u);
}

TEST(InstanceParams, Rejects) {
  EXPECT_THROW(InstanceParams::make(2, 5, 1), lrc::UsageError);
  EXPECT_THROW(InstanceParams::make(8, 12, 1), lrc::UsageError);
  EXPECT_THROW(InstanceParams::make(8, 31, 0), lrc::UsageError);
  EXPECT_THROW(InstanceParams::make(8, 1, 1), lrc::UsageError);
}

TEST(Covers, Examples) {
  auto p = InstanceParams::make(8, 31, 1);
  EXPECT_TRUE(lrc::covers(1, 1, p));
  EXPECT_TRUE(lrc::covers(1, 30, p));
  EXPECT_FALSE(lrc::covers(1, 31, p));
  EXPECT_TRUE(lrc::covers(9, 31, p));   // 279 = 0 mod 279
  EXPECT_FALSE(lrc::covers(2, 124, p));  // 248 is exactly 31 from 279
  EXPECT_TRUE(lrc::covers(2, 125, p));   // 250
  EXPECT_FALSE(lrc::covers(2, 62, p));  // 124
}

TEST(CoverTable, RowOfUnitSpeed) {
  auto p = InstanceParams::make(8, 31, 1);
  auto t = lrc::build_table(p);
  for (std::uint64_t j = 1; j <= p.half; ++j) EXPECT_EQ(t.covers_target(1, j), j <= 30) << j;
}

TEST(CoverTable, UnitRowPopulation) {
  // Coprime v permutes residues: 2cd - 2 nonzero j are covered in 1..M-1,
  // split evenly between the halves, plus M/2 when it is covered.
  for (auto [k, d, c] : {std::tuple{8u, 31u, 1u}, {5u, 31u, 1u}, {8u, 17u, 3u}, {4u, 7u, 2u}, {3u, 16u, 1u}}) {
    auto p = InstanceParams::make(k, d, c);
    auto t = lrc::build_table(p);
    for (std::uint64_t v = 1; v <= p.half; ++v) {
      if (std::gcd(v, p.modulus) != 1) continue;
      std::size_t pop = lrc::bits::popcount(t.row(v));
      std::size_t expected = p.threshold - 1;
      if (p.modulus % 2 == 0 && dense_covers(v, p.modulus / 2, k, p.modulus)) ++expected;
      ASSERT_EQ(pop, expected) << "k=" << k << " d=" << d << " c=" << c << " v=" << v;
    }
  }
  auto p = InstanceParams::make(8, 31, 1);
  auto t = lrc::build_table(p);
  EXPECT_EQ(lrc::bits::popcount(t.row(1)), 30u);
  EXPECT_EQ(lrc::bits::popcount(t.row(2)), 30u);
}

TEST(CoverTable, MatchesDenseEvaluation) {
  for (auto [k, d, c] : {std::tuple{3u, 5u, 1u}, {3u, 4u, 3u}, {4u, 7u, 1u}, {8u, 9u, 1u}, {6u, 5u, 2u}}) {
    auto p = InstanceParams::make(k, d, c);
    auto t = lrc::build_table(p);
    for (std::uint64_t v = 1; v <= p.half; ++v)
      for (std::uint64_t j = 1; j <= p.half; ++j)
        ASSERT_EQ(t.covers_target(v, j), dense_covers(v, j, k, p.modulus)) << v << "," << j;
  }
}

TEST(Covers, FoldingSymmetry) {
  std::mt19937_64 rng(11);
  for (auto [k, d, c] : {std::tuple{8u, 31u, 1u}, {5u, 13u, 2u}, {8u, 25u, 5u}}) {
    auto p = InstanceParams::make(k, d, c);
    const auto m = p.modulus;
    for (int i = 0; i < 5000; ++i) {
      std::uint64_t v = rng() % m, j = rng() % m;
      bool base = lrc::covers(v, j, p);
      ASSERT_EQ(base, lrc::covers(j, v, p));
      ASSERT_EQ(base, lrc::covers((m - v) % m, j, p));
      ASSERT_EQ(base, lrc::covers(v, (m - j) % m, p));
    }
  }
}

TEST(Candidate, FoldingKeepsAttributes) {
  auto p = InstanceParams::make(8, 27, 1);
  for (std::uint64_t v = 1; v < p.modulus; ++v) {
    auto a = lrc::Candidate::make(v, p);
    auto b = lrc::Candidate::make(p.modulus - v, p);
    ASSERT_EQ(a.div3, b.div3);
    ASSERT_EQ(a.div9, b.div9);
    ASSERT_EQ(a.valp, b.valp);
    ASSERT_EQ(a.shares, b.shares);
  }
}

TEST(AdmissibleCandidates, CountsMatchDirectFilter) {
  struct Case {
    unsigned k;
    std::uint64_t d, c;
    lrc::ProfileMode mode;
    std::size_t expected;
  };
  for (auto cs : {Case{8, 31, 1, lrc::ProfileMode::NineRunner, 135}, Case{5, 31, 1, lrc::ProfileMode::Generic, 90},
                  Case{8, 81, 1, lrc::ProfileMode::NineRunner, 360}}) {
    auto p = InstanceParams::make(cs.k, cs.d, cs.c);
    auto profile = lrc::ConditionProfile::make(cs.mode, p);
    // A single speed fails on its own only by being a multiple of d.
    std::size_t direct = 0;
    for (std::uint64_t v = 1; v <= p.half; ++v) direct += v % cs.d != 0;
    auto cands = lrc::admissible_candidates(p, profile);
    EXPECT_EQ(cands.size(), direct);
    EXPECT_EQ(cands.size(), cs.expected);
    for (const auto& cand : cands) EXPECT_NE(cand.v % cs.d, 0u);
  }
}

TEST(CoverTable, CacheRoundTrip) {
  auto dir = temp_dir("cache");
  auto p = InstanceParams::make(8, 31, 1);
  auto t = lrc::build_table(p);
  lrc::save_table(t, dir / "t.bin");
  auto u = lrc::load_table(dir / "t.bin", p);
  EXPECT_EQ(t.checksum(), u.checksum());
  EXPECT_TRUE(std::equal(t.raw_words().begin(), t.raw_words().end(), u.raw_words().begin(), u.raw_words().end()));
  EXPECT_THROW(lrc::load_table(dir / "t.bin", InstanceParams::make(8, 37, 1)), lrc::FormatError);
  std::filesystem::remove_all(dir);
}

TEST(CoverTable, CacheCorruptionDetected) {
  auto dir = temp_dir("corrupt");
  auto p = InstanceParams::make(5, 31, 1);
  lrc::save_table(lrc::build_table(p), dir / "t.bin");
  {
    std::fstream f(dir / "t.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(64);
    char byte = 0;
    f.read(&byte, 1);
    byte ^= 0x10;
    f.seekp(64);
    f.write(&byte, 1);
  }
  EXPECT_THROW(lrc::load_table(dir / "t.bin", p), lrc::FormatError);
  std::filesystem::resize_file(dir / "t.bin", 20);
  EXPECT_THROW(lrc::load_table(dir / "t.bin", p), lrc::FormatError);
  EXPECT_THROW(lrc::load_table(dir / "missing.bin", p), lrc::FormatError);
  std::filesystem::remove_all(dir);
}

TEST(CoverTable, MemoryBudget) {
  auto p = InstanceParams::make(8, 31, 1);
  try {
    lrc::build_table(p, 100);
    FAIL() << "expected ResourceError";
  } catch (const lrc::ResourceError& e) {
    // 139 rows of 3 words.
    EXPECT_NE(std::string(e.what()).find("3336"), std::string::npos) << e.what();
  }
}
