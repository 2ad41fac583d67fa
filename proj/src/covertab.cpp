#include "lrc/covertab.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <string>

#include "lrc/conditions.hpp"
#include "lrc/errors.hpp"

namespace lrc {

namespace {

constexpr std::array<char, 8> kTableMagic = {'L', 'R', 'C', 'C', 'O', 'V', 'T', '\0'};
constexpr std::uint32_t kTableVersion = 1;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const unsigned char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
  return h;
}

// Explicit little-endian encoding so cache files are portable.
void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}
std::uint64_t get_uint(const std::string& in, std::size_t& pos, int width) {
  if (pos + static_cast<std::size_t>(width) > in.size()) throw FormatError("table cache truncated");
  std::uint64_t x = 0;
  for (int i = 0; i < width; ++i)
    x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)])) << (8 * i);
  pos += static_cast<std::size_t>(width);
  return x;
}

}  // namespace

InstanceParams InstanceParams::make(unsigned k, std::uint64_t d, std::uint64_t c) {
  if (k < 3) throw UsageError("k must be >= 3, got " + std::to_string(k));
  if (c < 1) throw UsageError("c must be >= 1");
  if (d < 2) throw UsageError("d must be >= 2, got " + std::to_string(d));
  auto pp = prime_power_decompose(d);
  if (!pp) throw UsageError("d must be a prime power, got " + std::to_string(d));
  if (d > (std::uint64_t{1} << 40) / c / (k + 1)) throw UsageError("modulus (k+1)*c*d too large");

  InstanceParams params;
  params.k = k;
  params.d = d;
  params.c = c;
  params.modulus = static_cast<std::uint64_t>(k + 1) * c * d;
  params.threshold = c * d;
  params.half = params.modulus / 2;
  params.divisor = *pp;
  params.modulus_primes = prime_factors(params.modulus);
  if (params.half < k) throw UsageError("half-range smaller than k; nothing to search");
  return params;
}

bool covers(std::uint64_t v, std::uint64_t j, const InstanceParams& params) {
  auto r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) * j % params.modulus);
  return r < params.threshold || r > params.modulus - params.threshold;
}

Candidate Candidate::make(std::uint64_t v, const InstanceParams& params) {
  Candidate cand;
  cand.v = v;
  cand.div3 = v % 3 == 0;
  cand.div9 = v % 9 == 0;
  unsigned e = v == 0 ? params.divisor.a : valuation(v, params.divisor.p);
  cand.valp = std::min(e, params.divisor.a);
  for (std::size_t i = 0; i < params.modulus_primes.size(); ++i)
    if (v % params.modulus_primes[i] == 0) cand.shares |= std::uint32_t{1} << i;
  return cand;
}

std::uint64_t CoverTable::checksum() const {
  return fnv1a(kFnvOffset, reinterpret_cast<const unsigned char*>(words_.data()), words_.size() * sizeof(bits::Word));
}

CoverTable build_table(const InstanceParams& params, std::size_t memory_budget) {
  const std::size_t wpr = bits::words_for(params.half);
  const std::size_t bytes = params.half * wpr * sizeof(bits::Word);
  if (bytes > memory_budget)
    throw ResourceError("cover table needs " + std::to_string(bytes) + " bytes, budget is " +
                        std::to_string(memory_budget));

  CoverTable table;
  table.params_ = params;
  table.words_per_row_ = wpr;
  table.words_.assign(params.half * wpr, 0);
  const std::uint64_t m = params.modulus;
  for (std::uint64_t v = 1; v <= params.half; ++v) {
    std::span<bits::Word> row{table.words_.data() + (v - 1) * wpr, wpr};
    std::uint64_t r = 0;  // v*j mod M, advanced incrementally
    for (std::uint64_t j = 1; j <= params.half; ++j) {
      r += v;
      if (r >= m) r -= m;
      if (r < params.threshold || r > m - params.threshold) bits::set(row, j - 1);
    }
  }
  return table;
}

void save_table(const CoverTable& table, const std::filesystem::path& path) {
  const auto& p = table.params();
  std::string out(kTableMagic.begin(), kTableMagic.end());
  put_u32(out, kTableVersion);
  put_u32(out, p.k);
  put_u64(out, p.d);
  put_u64(out, p.c);
  put_u64(out, p.modulus);
  put_u64(out, p.half);
  put_u64(out, table.words_per_row());
  for (auto w : table.raw_words()) put_u64(out, w);
  put_u64(out, fnv1a(kFnvOffset, reinterpret_cast<const unsigned char*>(out.data()), out.size()));

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("cannot write table cache " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw FormatError("short write on table cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CoverTable load_table(const std::filesystem::path& path, const InstanceParams& params) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open table cache " + path.string());
  std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (in.size() < kTableMagic.size() + 8 || std::memcmp(in.data(), kTableMagic.data(), kTableMagic.size()) != 0)
    throw FormatError("bad table cache magic in " + path.string());

  std::size_t pos = kTableMagic.size();
  if (get_uint(in, pos, 4) != kTableVersion) throw FormatError("unsupported table cache version");
  auto k = get_uint(in, pos, 4);
  auto d = get_uint(in, pos, 8);
  auto c = get_uint(in, pos, 8);
  auto m = get_uint(in, pos, 8);
  auto half = get_uint(in, pos, 8);
  auto wpr = get_uint(in, pos, 8);
  if (k != params.k || d != params.d || c != params.c || m != params.modulus || half != params.half ||
      wpr != bits::words_for(params.half))
    throw FormatError("table cache " + path.string() + " was built for different parameters");
  if (in.size() != pos + half * wpr * 8 + 8) throw FormatError("table cache has wrong length");

  const std::size_t body = in.size() - 8;
  std::size_t trailer_pos = body;
  auto stored = get_uint(in, trailer_pos, 8);
  if (stored != fnv1a(kFnvOffset, reinterpret_cast<const unsigned char*>(in.data()), body))
    throw FormatError("table cache checksum mismatch in " + path.string());

  CoverTable table;
  table.params_ = params;
  table.words_per_row_ = wpr;
  table.words_.resize(half * wpr);
  for (auto& w : table.words_) w = get_uint(in, pos, 8);
  return table;
}

std::vector<Candidate> admissible_candidates(const InstanceParams& params, const ConditionProfile& profile) {
  std::vector<Candidate> out;
  const TupleCounters empty(params);
  for (std::uint64_t v = 1; v <= params.half; ++v) {
    auto cand = Candidate::make(v, params);
    if (admits(empty, cand, profile)) out.push_back(cand);
  }
  return out;
}

}  // namespace lrc
