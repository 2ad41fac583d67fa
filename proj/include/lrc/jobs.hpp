#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrc/conditions.hpp"
#include "lrc/record.hpp"

namespace lrc {

struct JobSpec {
  unsigned k = 0;
  std::uint64_t d = 0;
  std::uint64_t c = 1;
  ProfileMode profile = ProfileMode::Generic;
};

struct JobConfig {
  std::vector<JobSpec> jobs;
  unsigned workers = 1;
  std::size_t memory_budget = kDefaultMemoryBudget;
  std::optional<std::chrono::milliseconds> timeout;
  std::optional<std::filesystem::path> output_dir;  // records are written here when set
  std::optional<std::filesystem::path> table_cache_dir;
  bool progress = false;  // progress lines on stderr
};

/// Batch file: {"workers", "timeout_seconds", "memory_bytes", "output",
/// "table_cache", "jobs": [{"k", "d", "c", "profile"}...]}. Only "jobs" is
/// required; a job without "profile" gets default_profile_mode(k).
JobConfig parse_job_config(const std::string& text);
JobConfig load_job_config(const std::filesystem::path& path);

/// Runs every job in order. A job that throws becomes an Aborted record with
/// the reason; the batch continues. Each record is sealed and, when
/// output_dir is set, written to its own file.
std::vector<RunRecord> run_verify_job(const JobConfig& config);

/// Runs one job; shared by run_verify_job and the prover's recheck.
RunRecord run_single_job(const JobSpec& job, const JobConfig& config);

/// CSV with header "dc,d,c,wall_seconds,nodes,k,profile", rows sorted by d*c.
std::string emit_stats(std::span<const RunRecord> records);

/// Current UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace lrc
