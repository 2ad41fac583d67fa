// lrc: divisor-covering verifier for the lonely runner conjecture.
//
//   lrc verify  --k 8 --d 31 --c 1 [--profile nine] [--out records/]
//   lrc verify  --config configs/nine_runners_jobs.json
//   lrc prove   --records records/ --k 8 --entries configs/nine_runners_entries.json
//   lrc encode  --k 5 --d 31 --format dimacs --out k5_d31.cnf
//   lrc oracle  exhaustive|time|lr ...
//   lrc bound   --k 8
//   lrc stats   --records records/
//
// Exit codes: 0 verified / proof complete, 1 counterexample found,
// 2 aborted or insufficient, 3 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lrc/cnf.hpp"
#include "lrc/errors.hpp"
#include "lrc/jobs.hpp"
#include "lrc/oracle.hpp"
#include "lrc/prover.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitUsage = 3;

std::size_t parse_bytes(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long n = std::stoull(text, &pos);
  std::string suffix = text.substr(pos);
  if (suffix.empty()) return n;
  if (suffix == "K" || suffix == "k") return n << 10;
  if (suffix == "M" || suffix == "m") return n << 20;
  if (suffix == "G" || suffix == "g") return n << 30;
  throw lrc::UsageError("bad memory size '" + text + "'");
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw lrc::UsageError("cannot write " + path);
  f << text;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct InstanceArgs {
  unsigned k = 8;
  std::uint64_t d = 0;
  std::uint64_t c = 1;
  std::string profile;

  void add_to(CLI::App* app, bool with_c = true) {
    app->add_option("--k", k, "number of speeds (runners minus one)");
    app->add_option("--d", d, "prime-power divisor to certify");
    if (with_c) app->add_option("--c", c, "multiplier c >= 1");
    app->add_option("--profile", profile, "generic | nine (default: nine when k = 8)");
  }
  lrc::ProfileMode mode() const {
    return profile.empty() ? lrc::default_profile_mode(k) : lrc::parse_profile_mode(profile);
  }
};

int cmd_verify(const InstanceArgs& inst, const std::string& config_path, unsigned threads, double timeout,
               const std::string& memory, const std::string& out_dir, const std::string& cache_dir, bool progress) {
  lrc::JobConfig config;
  if (!config_path.empty()) {
    config = lrc::load_job_config(config_path);
  } else {
    if (inst.d == 0) throw lrc::UsageError("verify needs --d or --config");
    // Reject bad flags up front; batch jobs instead become Aborted records.
    auto params = lrc::InstanceParams::make(inst.k, inst.d, inst.c);
    lrc::ConditionProfile::make(inst.mode(), params);
    config.jobs.push_back({inst.k, inst.d, inst.c, inst.mode()});
  }
  if (threads) config.workers = threads;
  if (timeout > 0) config.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
  if (!memory.empty()) config.memory_budget = parse_bytes(memory);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (!cache_dir.empty()) config.table_cache_dir = cache_dir;
  if (progress) config.progress = true;

  bool any_counterexample = false, any_aborted = false;
  for (const auto& job : config.jobs) {
    auto record = lrc::run_single_job(job, config);
    std::string where;
    if (config.output_dir) where = " record=" + lrc::write_record(record, *config.output_dir).string();
    std::cout << "k=" << record.k << " d=" << record.d << " c=" << record.c << " profile=" << record.profile << " "
              << lrc::to_string(record.verdict) << " nodes=" << record.nodes << " prunes=" << record.prune_hits
              << " exclusions=" << record.exclusions << " seconds=" << record.wall_seconds;
    if (record.witness) std::cout << " witness=" << join(*record.witness);
    if (!record.abort_reason.empty()) std::cout << " reason=\"" << record.abort_reason << "\"";
    std::cout << " hash=" << record.content_hash << where << std::endl;
    any_counterexample |= record.verdict == lrc::Verdict::CounterexampleFound;
    any_aborted |= record.verdict == lrc::Verdict::Aborted;
  }
  if (any_counterexample) return kExitCounterexample;
  return any_aborted ? kExitIncomplete : kExitOk;
}

std::vector<lrc::CertifiedEntry> read_entries(const std::string& path, bool nine_set, unsigned k,
                                              const lrc::RecordStore& store) {
  std::vector<lrc::CertifiedEntry> entries;
  if (nine_set) {
    for (auto [d, c] : lrc::nine_runner_divisors()) entries.push_back({d, c, ""});
  } else {
    std::ifstream f(path);
    if (!f) throw lrc::UsageError("cannot open entries file " + path);
    auto j = nlohmann::json::parse(f);
    for (const auto& row : j)
      entries.push_back({row.at("d").get<std::uint64_t>(), row.value("c", std::uint64_t{1}),
                         row.value("record", std::string{})});
  }
  for (auto& e : entries) {
    if (!e.record_ref.empty()) continue;
    const auto* r = store.latest_verified(k, e.d, e.c);
    if (!r)
      throw lrc::ProofError("no Verified record for k=" + std::to_string(k) + " d=" + std::to_string(e.d) +
                            " c=" + std::to_string(e.c));
    e.record_ref = r->content_hash;
  }
  return entries;
}

int cmd_prove(unsigned k, const std::string& records_dir, const std::string& entries_path, bool nine_set,
              const std::string& out, const std::string& hashes_out, std::uint64_t recheck_small) {
  if (entries_path.empty() && !nine_set) throw lrc::UsageError("prove needs --entries or --nine-runner-set");
  auto store = lrc::RecordStore::load(records_dir);
  for (const auto& why : store.rejected()) std::cerr << "rejected record " << why << "\n";
  auto entries = read_entries(entries_path, nine_set, k, store);

  if (recheck_small > 0) {
    for (const auto& e : entries) {
      const auto* r = store.find(e.record_ref);
      if (!r) continue;  // reported by assemble_certificate
      auto params = lrc::InstanceParams::make(k, e.d, e.c);
      if (params.half > recheck_small) continue;
      lrc::JobConfig cfg;
      auto rerun = lrc::run_single_job({k, e.d, e.c, lrc::parse_profile_mode(r->profile)}, cfg);
      std::cerr << "recheck k=" << k << " d=" << e.d << " c=" << e.c << ": " << lrc::to_string(rerun.verdict) << "\n";
      if (rerun.verdict != lrc::Verdict::Verified)
        throw lrc::ProofError("recheck of d=" + std::to_string(e.d) + " did not verify");
    }
  }

  auto cert = lrc::assemble_certificate(entries, k, store);
  write_output(lrc::format_certificate(cert), out);
  if (!hashes_out.empty()) write_output(lrc::format_record_hashes(cert), hashes_out);
  std::cerr << lrc::to_string(cert.verdict) << ": lcm " << lrc::scientific(cert.lcm) << " vs bound "
            << cert.bound.approx() << "\n";
  return cert.verdict == lrc::ProofVerdict::ProofComplete ? kExitOk : kExitIncomplete;
}

int cmd_encode(const InstanceArgs& inst, const std::string& format, const std::string& out) {
  if (inst.d == 0) throw lrc::UsageError("encode needs --d");
  auto params = lrc::InstanceParams::make(inst.k, inst.d, 1);
  auto profile = lrc::ConditionProfile::make(inst.mode(), params);
  auto doc = lrc::cnf::encode_instance(params, profile);
  if (format == "dimacs") {
    write_output(lrc::cnf::to_dimacs(doc), out);
  } else if (format == "knf") {
    write_output(lrc::cnf::to_knf(doc), out);
  } else {
    throw lrc::UsageError("unknown format '" + format + "' (dimacs or knf)");
  }
  return kExitOk;
}

int cmd_oracle_exhaustive(const InstanceArgs& inst) {
  auto params = lrc::InstanceParams::make(inst.k, inst.d, inst.c);
  auto profile = lrc::ConditionProfile::make(inst.mode(), params);
  auto outcome = lrc::oracle::exhaustive_bad_cover(params, profile);
  std::cout << lrc::to_string(outcome.verdict) << " subsets=" << outcome.stats.nodes;
  if (outcome.witness) std::cout << " witness=" << join(*outcome.witness);
  std::cout << "\n";
  return outcome.verdict == lrc::Verdict::Verified ? kExitOk : kExitCounterexample;
}

int cmd_oracle_time(const InstanceArgs& inst, const std::string& tuple) {
  auto params = lrc::InstanceParams::make(inst.k, inst.d, inst.c);
  auto t = lrc::oracle::modular_lonely_time(parse_list(tuple), params);
  if (t) {
    std::cout << "lonely time t=" << *t << " (t/M = " << *t << "/" << params.modulus << ")\n";
  } else {
    std::cout << "no lonely time modulo " << params.modulus << "\n";
  }
  return kExitOk;
}

int cmd_oracle_lr(const std::string& speeds) {
  auto result = lrc::oracle::lr_holds(parse_list(speeds));
  if (result.holds) {
    std::cout << "LR property holds, t=" << result.witness->to_string() << "\n";
  } else {
    std::cout << "LR property fails\n";
  }
  return kExitOk;
}

int cmd_bound(unsigned k) {
  auto bound = lrc::product_bound(k);
  std::cout << "k=" << k << "\n";
  std::cout << "bound=" << bound.to_string() << "\n";
  std::cout << "approx=" << bound.approx() << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& records_dir, const std::string& out) {
  auto store = lrc::RecordStore::load(records_dir);
  for (const auto& why : store.rejected()) std::cerr << "rejected record " << why << "\n";
  std::vector<lrc::RunRecord> records;
  for (const auto& [hash, r] : store.records()) records.push_back(r);
  write_output(lrc::emit_stats(records), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisor-covering verifier for the lonely runner conjecture"};
  app.require_subcommand(1);

  InstanceArgs verify_inst, encode_inst, oracle_inst;
  std::string config_path, memory, out_dir, cache_dir;
  unsigned threads = 0;
  double timeout = 0;
  bool progress = false;
  auto* verify = app.add_subcommand("verify", "search for bad covers of one or many (k, d, c) instances");
  verify_inst.add_to(verify);
  verify->add_option("--config", config_path, "batch job file (JSON)");
  verify->add_option("--threads", threads, "search workers per job");
  verify->add_option("--timeout", timeout, "wall-clock budget per job, seconds");
  verify->add_option("--memory", memory, "cover table memory budget, bytes (K/M/G suffix allowed)");
  verify->add_option("--out", out_dir, "directory for run records");
  verify->add_option("--table-cache", cache_dir, "directory for cached cover tables");
  verify->add_flag("--progress", progress, "progress lines on stderr");

  unsigned prove_k = 8;
  std::string records_dir, entries_path, cert_out, hashes_out;
  bool nine_set = false;
  std::uint64_t recheck_small = 0;
  auto* prove = app.add_subcommand("prove", "assemble a certificate from Verified records");
  prove->add_option("--k", prove_k, "number of speeds");
  prove->add_option("--records", records_dir, "run record directory")->required();
  prove->add_option("--entries", entries_path, "entries file: [{\"d\", \"c\", \"record\"?}, ...]");
  prove->add_flag("--nine-runner-set", nine_set, "use the 42 nine-runner divisors and multipliers");
  prove->add_option("--out", cert_out, "certificate output (default stdout)");
  prove->add_option("--hashes-out", hashes_out, "detached record hash list");
  prove->add_option("--recheck-small", recheck_small, "re-run entries with half-range up to this size");

  std::string format = "dimacs", encode_out;
  auto* encode = app.add_subcommand("encode", "export the SAT encoding (c = 1, prime d)");
  encode_inst.add_to(encode, false);
  encode->add_option("--format", format, "dimacs | knf");
  encode->add_option("--out", encode_out, "output file (default stdout)");

  std::string tuple, speeds;
  auto* oracle = app.add_subcommand("oracle", "brute-force references");
  oracle->require_subcommand(1);
  auto* exhaustive = oracle->add_subcommand("exhaustive", "enumerate all candidate subsets (half <= 80)");
  oracle_inst.add_to(exhaustive);
  auto* lonely_time = oracle->add_subcommand("time", "smallest lonely time modulo M for a tuple");
  oracle_inst.add_to(lonely_time);
  lonely_time->add_option("--tuple", tuple, "comma-separated residues")->required();
  auto* lr = oracle->add_subcommand("lr", "exact LR-property check for explicit speeds");
  lr->add_option("--speeds", speeds, "comma-separated distinct speeds")->required();

  unsigned bound_k = 8;
  auto* bound = app.add_subcommand("bound", "print the exact product bound");
  bound->add_option("--k", bound_k, "number of speeds");

  std::string stats_records, stats_out;
  auto* stats = app.add_subcommand("stats", "CSV of run statistics");
  stats->add_option("--records", stats_records, "run record directory")->required();
  stats->add_option("--out", stats_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify)
      return cmd_verify(verify_inst, config_path, threads, timeout, memory, out_dir, cache_dir, progress);
    if (*prove) return cmd_prove(prove_k, records_dir, entries_path, nine_set, cert_out, hashes_out, recheck_small);
    if (*encode) return cmd_encode(encode_inst, format, encode_out);
    if (*exhaustive) return cmd_oracle_exhaustive(oracle_inst);
    if (*lonely_time) return cmd_oracle_time(oracle_inst, tuple);
    if (*lr) return cmd_oracle_lr(speeds);
    if (*bound) return cmd_bound(bound_k);
    if (*stats) return cmd_stats(stats_records, stats_out);
  } catch (const lrc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lrc::ProofError& e) {
    std::cerr << "proof error: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIncomplete;
  }
  return kExitUsage;
}
