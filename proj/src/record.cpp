#include "lrc/record.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "lrc/errors.hpp"

namespace lrc {

using ordered_json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

namespace {

ordered_json payload_json(const RunRecord& r) {
  ordered_json j;
  j["k"] = r.k;
  j["d"] = r.d;
  j["c"] = r.c;
  j["profile"] = r.profile;
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness ? ordered_json(*r.witness) : ordered_json(nullptr);
  j["nodes"] = r.nodes;
  j["prune_hits"] = r.prune_hits;
  j["exclusions"] = r.exclusions;
  j["wall_seconds"] = r.wall_seconds;
  j["worker_count"] = r.worker_count;
  j["tool_version"] = r.tool_version;
  j["table_checksum"] = r.table_checksum;
  j["timestamp"] = r.timestamp;
  j["abort_reason"] = r.abort_reason;
  return j;
}

}  // namespace

std::string canonical_payload(const RunRecord& record) { return payload_json(record).dump(); }

std::string compute_content_hash(const RunRecord& record) { return sha256_hex(canonical_payload(record)); }

void seal(RunRecord& record) { record.content_hash = compute_content_hash(record); }

bool hash_verifies(const RunRecord& record) { return record.content_hash == compute_content_hash(record); }

std::string to_text(const RunRecord& record) {
  auto j = payload_json(record);
  j["content_hash"] = record.content_hash;
  return j.dump(2) + "\n";
}

RunRecord parse_record(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    RunRecord r;
    r.k = j.at("k").get<unsigned>();
    r.d = j.at("d").get<std::uint64_t>();
    r.c = j.at("c").get<std::uint64_t>();
    r.profile = j.at("profile").get<std::string>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (!j.at("witness").is_null()) r.witness = j.at("witness").get<std::vector<std::uint64_t>>();
    r.nodes = j.at("nodes").get<std::uint64_t>();
    r.prune_hits = j.at("prune_hits").get<std::uint64_t>();
    r.exclusions = j.at("exclusions").get<std::uint64_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.worker_count = j.at("worker_count").get<unsigned>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.table_checksum = j.at("table_checksum").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.abort_reason = j.at("abort_reason").get<std::string>();
    r.content_hash = j.at("content_hash").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed run record: ") + e.what());
  }
}

std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string stamp;
  for (char ch : record.timestamp)
    if (std::isalnum(static_cast<unsigned char>(ch))) stamp.push_back(ch);
  std::ostringstream base;
  base << "k" << record.k << "_d" << record.d << "_c" << record.c << "_" << record.profile << "_" << stamp << "_"
       << record.content_hash.substr(0, 12);

  std::filesystem::path target = dir / (base.str() + ".json");
  for (int n = 1; std::filesystem::exists(target); ++n)
    target = dir / (base.str() + "_" + std::to_string(n) + ".json");

  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw FormatError("cannot write " + tmp.string());
    f << to_text(record);
    f.flush();
    if (!f) throw FormatError("short write on " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
  return target;
}

RunRecord read_record(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_record(buf.str());
}

RecordStore RecordStore::load(const std::filesystem::path& dir) {
  RecordStore store;
  if (!std::filesystem::is_directory(dir)) throw UsageError("record directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    try {
      auto record = read_record(path);
      if (!hash_verifies(record)) {
        store.rejected_.push_back(path.string() + ": content hash does not verify");
        continue;
      }
      store.add(record);
    } catch (const FormatError& e) {
      store.rejected_.push_back(path.string() + ": " + e.what());
    }
  }
  return store;
}

void RecordStore::add(const RunRecord& record) {
  if (!hash_verifies(record)) throw ProofError("refusing record with bad content hash");
  records_.emplace(record.content_hash, record);
}

const RunRecord* RecordStore::find(const std::string& content_hash) const {
  auto it = records_.find(content_hash);
  return it == records_.end() ? nullptr : &it->second;
}

const RunRecord* RecordStore::latest_verified(unsigned k, std::uint64_t d, std::uint64_t c) const {
  const RunRecord* best = nullptr;
  for (const auto& [hash, r] : records_) {
    if (r.k != k || r.d != d || r.c != c || r.verdict != Verdict::Verified) continue;
    if (!best || r.timestamp > best->timestamp) best = &r;
  }
  return best;
}

}  // namespace lrc
