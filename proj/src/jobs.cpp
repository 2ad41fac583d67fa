#include "lrc/jobs.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lrc/errors.hpp"

namespace lrc {

JobConfig parse_job_config(const std::string& text) {
  JobConfig config;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("workers")) config.workers = j["workers"].get<unsigned>();
    if (j.contains("memory_bytes")) config.memory_budget = j["memory_bytes"].get<std::size_t>();
    if (j.contains("timeout_seconds") && !j["timeout_seconds"].is_null())
      config.timeout = std::chrono::milliseconds(static_cast<long long>(j["timeout_seconds"].get<double>() * 1000));
    if (j.contains("output")) config.output_dir = j["output"].get<std::string>();
    if (j.contains("table_cache")) config.table_cache_dir = j["table_cache"].get<std::string>();
    for (const auto& row : j.at("jobs")) {
      JobSpec job;
      job.k = row.at("k").get<unsigned>();
      job.d = row.at("d").get<std::uint64_t>();
      job.c = row.value("c", std::uint64_t{1});
      job.profile = row.contains("profile") ? parse_profile_mode(row["profile"].get<std::string>())
                                            : default_profile_mode(job.k);
      config.jobs.push_back(job);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed job config: ") + e.what());
  }
  if (config.jobs.empty()) throw UsageError("job config has no jobs");
  if (config.workers < 1) throw UsageError("workers must be >= 1");
  return config;
}

JobConfig load_job_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open job config " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_job_config(buf.str());
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

namespace {

std::string hex16(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

CoverTable obtain_table(const InstanceParams& params, const JobConfig& config) {
  if (!config.table_cache_dir) return build_table(params, config.memory_budget);
  std::filesystem::create_directories(*config.table_cache_dir);
  auto path = *config.table_cache_dir /
              ("table_k" + std::to_string(params.k) + "_d" + std::to_string(params.d) + "_c" +
               std::to_string(params.c) + ".bin");
  if (std::filesystem::exists(path)) {
    try {
      return load_table(path, params);
    } catch (const FormatError& e) {
      std::cerr << "ignoring table cache: " << e.what() << "\n";
    }
  }
  auto table = build_table(params, config.memory_budget);
  save_table(table, path);
  return table;
}

}  // namespace

RunRecord run_single_job(const JobSpec& job, const JobConfig& config) {
  RunRecord record;
  record.k = job.k;
  record.d = job.d;
  record.c = job.c;
  record.profile = to_string(job.profile);
  record.worker_count = config.workers;
  record.tool_version = LRC_VERSION;
  record.timestamp = utc_timestamp();
  auto start = std::chrono::steady_clock::now();
  try {
    auto params = InstanceParams::make(job.k, job.d, job.c);
    auto profile = ConditionProfile::make(job.profile, params);
    auto table = obtain_table(params, config);
    record.table_checksum = hex16(table.checksum());
    auto candidates = admissible_candidates(params, profile);

    SearchOptions options;
    options.workers = config.workers;
    options.timeout = config.timeout;
    if (config.progress) {
      std::string tag = "k=" + std::to_string(job.k) + " d=" + std::to_string(job.d) + " c=" + std::to_string(job.c);
      options.progress = [tag](const ProgressEvent& ev) {
        std::cerr << tag << " branch " << ev.branch + 1 << "/" << ev.branches << " nodes " << ev.nodes
                  << " elapsed " << std::fixed << std::setprecision(1) << ev.elapsed << "s\n";
      };
    }
    auto outcome = find_bad_cover(table, candidates, profile, options);
    record.verdict = outcome.verdict;
    record.witness = outcome.witness;
    record.nodes = outcome.stats.nodes;
    record.prune_hits = outcome.stats.prune_hits;
    record.exclusions = outcome.stats.exclusions;
    record.wall_seconds = outcome.stats.seconds;
    record.abort_reason = outcome.abort_reason;
  } catch (const std::exception& e) {
    record.verdict = Verdict::Aborted;
    record.abort_reason = e.what();
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  seal(record);
  return record;
}

std::vector<RunRecord> run_verify_job(const JobConfig& config) {
  if (config.jobs.empty()) throw UsageError("no jobs to run");
  std::vector<RunRecord> records;
  for (const auto& job : config.jobs) {
    auto record = run_single_job(job, config);
    if (config.output_dir) write_record(record, *config.output_dir);
    records.push_back(std::move(record));
  }
  return records;
}

std::string emit_stats(std::span<const RunRecord> records) {
  std::vector<const RunRecord*> rows;
  for (const auto& r : records) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const RunRecord* a, const RunRecord* b) {
    return a->d * a->c != b->d * b->c ? a->d * a->c < b->d * b->c : a->d < b->d;
  });
  std::ostringstream out;
  out << "dc,d,c,wall_seconds,nodes,k,profile\n";
  for (const auto* r : rows)
    out << r->d * r->c << "," << r->d << "," << r->c << "," << std::fixed << std::setprecision(6) << r->wall_seconds
        << std::defaultfloat << "," << r->nodes << "," << r->k << "," << r->profile << "\n";
  return out.str();
}

}  // namespace lrc
