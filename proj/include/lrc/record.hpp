#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrc/search.hpp"

namespace lrc {

/// Persisted outcome of one (k, d, c, profile) verification.
struct RunRecord {
  unsigned k = 0;
  std::uint64_t d = 0;
  std::uint64_t c = 0;
  std::string profile;
  Verdict verdict = Verdict::Aborted;
  std::optional<std::vector<std::uint64_t>> witness;
  std::uint64_t nodes = 0;
  std::uint64_t prune_hits = 0;
  std::uint64_t exclusions = 0;
  double wall_seconds = 0;
  unsigned worker_count = 1;
  std::string tool_version;
  std::string table_checksum;  // 16 hex digits
  std::string timestamp;       // UTC, 2026-01-31T12:00:00Z
  std::string abort_reason;
  std::string content_hash;    // SHA-256 over every other field

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

std::string sha256_hex(const std::string& data);

/// Canonical serialization of every field except content_hash.
std::string canonical_payload(const RunRecord& record);
std::string compute_content_hash(const RunRecord& record);
/// Sets content_hash from the other fields.
void seal(RunRecord& record);
bool hash_verifies(const RunRecord& record);

/// Stable-key-order text form (pretty JSON), content_hash included.
std::string to_text(const RunRecord& record);
/// Throws FormatError on malformed input. Does not check the hash.
RunRecord parse_record(const std::string& text);

/// Writes the record to a new file in dir (temp file + rename) and returns its
/// path. Never overwrites an existing record.
std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir);
RunRecord read_record(const std::filesystem::path& path);

/// Records loaded from a directory, keyed by content hash. Files whose hash
/// does not verify or that fail to parse are listed in rejected and never
/// served.
class RecordStore {
 public:
  static RecordStore load(const std::filesystem::path& dir);

  void add(const RunRecord& record);
  const RunRecord* find(const std::string& content_hash) const;
  /// Most recent Verified record for (k, d, c), any profile.
  const RunRecord* latest_verified(unsigned k, std::uint64_t d, std::uint64_t c) const;

  const std::map<std::string, RunRecord>& records() const { return records_; }
  const std::vector<std::string>& rejected() const { return rejected_; }

 private:
  std::map<std::string, RunRecord> records_;
  std::vector<std::string> rejected_;
};

}  // namespace lrc
