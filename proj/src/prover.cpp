#include "lrc/prover.hpp"

#include <numeric>
#include <sstream>

#include "json.hpp"
#include "lrc/errors.hpp"

namespace lrc {

using ordered_json = nlohmann::ordered_json;

std::string to_string(ProofVerdict verdict) {
  return verdict == ProofVerdict::ProofComplete ? "ProofComplete" : "Insufficient";
}

namespace {

constexpr const char* kCertificateFormat = "lrc-certificate/1";

ProofVerdict parse_proof_verdict(const std::string& text) {
  if (text == "ProofComplete") return ProofVerdict::ProofComplete;
  if (text == "Insufficient") return ProofVerdict::Insufficient;
  throw FormatError("unknown proof verdict '" + text + "'");
}

BigInt parse_big(const std::string& text) {
  BigInt out;
  if (text.empty() || out.set_str(text, 10) != 0) throw FormatError("not a decimal integer: '" + text + "'");
  return out;
}

std::string describe(const CertifiedEntry& e) {
  return "d=" + std::to_string(e.d) + " c=" + std::to_string(e.c) + " record=" + e.record_ref;
}

}  // namespace

Certificate assemble_certificate(std::span<const CertifiedEntry> entries, unsigned k, const RecordStore& records) {
  Certificate cert;
  cert.k = k;
  cert.bound = product_bound(k);
  cert.entries.assign(entries.begin(), entries.end());

  for (const auto& e : entries) {
    if (e.d < 2 || !prime_power_decompose(e.d)) throw ProofError("entry is not a prime power: " + describe(e));
    const RunRecord* r = records.find(e.record_ref);
    if (!r) throw ProofError("missing record for entry " + describe(e));
    if (r->verdict != Verdict::Verified)
      throw ProofError("record is " + to_string(r->verdict) + ", not Verified, for entry " + describe(e));
    if (r->k != k || r->d != e.d || r->c != e.c)
      throw ProofError("record parameters (k=" + std::to_string(r->k) + " d=" + std::to_string(r->d) +
                       " c=" + std::to_string(r->c) + ") do not match entry " + describe(e) +
                       " at k=" + std::to_string(k));
  }
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j)
      if (std::gcd(entries[i].d, entries[j].d) != 1)
        throw ProofError("entries " + std::to_string(entries[i].d) + " and " + std::to_string(entries[j].d) +
                         " are not coprime");

  for (const auto& e : entries) cert.lcm *= e.d;
  cert.lhs = cert.lcm * product_bound_denominator_raw(k);
  cert.rhs = product_bound_numerator_raw(k);
  if (cert.lhs > cert.rhs) {
    cert.verdict = ProofVerdict::ProofComplete;
  } else {
    cert.verdict = ProofVerdict::Insufficient;
    cert.deficit = ExactRational(cert.rhs, cert.lhs);
  }
  return cert;
}

std::string format_certificate(const Certificate& cert) {
  ordered_json j;
  j["format"] = kCertificateFormat;
  j["k"] = cert.k;
  j["verdict"] = to_string(cert.verdict);
  j["bound"] = cert.bound.to_string();
  j["bound_approx"] = cert.bound.approx();
  j["lcm"] = cert.lcm.get_str();
  j["lcm_approx"] = cert.lcm > 0 ? scientific(cert.lcm) : "0";
  ordered_json cmp;
  cmp["statement"] = "lcm * k^k > binom(k+1,2)^((k-1)*k)";
  cmp["lhs"] = cert.lhs.get_str();
  cmp["rhs"] = cert.rhs.get_str();
  cmp["holds"] = cert.lhs > cert.rhs;
  j["comparison"] = cmp;
  j["deficit"] = cert.deficit ? ordered_json(cert.deficit->to_string()) : ordered_json(nullptr);
  ordered_json entries = ordered_json::array();
  for (const auto& e : cert.entries) {
    ordered_json row;
    row["d"] = e.d;
    row["c"] = e.c;
    row["record"] = e.record_ref;
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kCertificateFormat) throw FormatError("unknown certificate format");
    Certificate cert;
    cert.k = j.at("k").get<unsigned>();
    cert.verdict = parse_proof_verdict(j.at("verdict").get<std::string>());
    cert.bound = ExactRational::parse(j.at("bound").get<std::string>());
    cert.lcm = parse_big(j.at("lcm").get<std::string>());
    cert.lhs = parse_big(j.at("comparison").at("lhs").get<std::string>());
    cert.rhs = parse_big(j.at("comparison").at("rhs").get<std::string>());
    if (!j.at("deficit").is_null()) cert.deficit = ExactRational::parse(j.at("deficit").get<std::string>());
    for (const auto& row : j.at("entries"))
      cert.entries.push_back({row.at("d").get<std::uint64_t>(), row.at("c").get<std::uint64_t>(),
                              row.at("record").get<std::string>()});
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed certificate: ") + e.what());
  }
}

std::string format_record_hashes(const Certificate& cert) {
  std::ostringstream out;
  for (const auto& e : cert.entries)
    out << e.record_ref << "  k=" << cert.k << " d=" << e.d << " c=" << e.c << "\n";
  return out.str();
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> nine_runner_divisors() {
  static const std::uint64_t divisors[] = {64,  81,  25,  121, 169, 17,  19,  23,  29,  31,  37,  41,  43,  47,
                                           53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109,
                                           113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191};
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (auto d : divisors) {
    std::uint64_t c = 1;
    if (d == 25) c = 5;
    else if (d == 17 || d == 19) c = 3;
    else if (d == 64 || d == 23 || d == 29 || d == 41) c = 2;
    out.emplace_back(d, c);
  }
  return out;
}

}  // namespace lrc
