#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrc/conditions.hpp"
#include "lrc/covertab.hpp"

namespace lrc {

enum class Verdict { Verified, CounterexampleFound, Aborted };

std::string to_string(Verdict verdict);
Verdict parse_verdict(const std::string& text);

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t prune_hits = 0;
  std::uint64_t exclusions = 0;
  double seconds = 0;
};

struct SearchOutcome {
  Verdict verdict = Verdict::Aborted;
  std::optional<std::vector<std::uint64_t>> witness;  // ascending speeds
  SearchStats stats;
  std::string abort_reason;
};

struct ProgressEvent {
  std::size_t branch = 0;   // top-level branch (or work unit) just finished
  std::size_t branches = 0;
  std::uint64_t nodes = 0;
  double elapsed = 0;
};

struct SearchOptions {
  bool pivot_mrv = true;         // branch on the uncovered target with fewest coverers
  bool prune = true;             // reject x when s * (slots left) < uncovered
  bool learn_exclusions = true;  // drop exhausted siblings from later subtrees
  bool shared_gains = true;      // reuse per-node gain ranking in the prune test (same decisions)
  unsigned workers = 1;
  unsigned split_depth = 2;      // work units are subtrees at this depth when workers > 1
  std::optional<std::chrono::milliseconds> timeout;
  const std::atomic<bool>* cancel = nullptr;
  std::function<void(const ProgressEvent&)> progress;
};

/// Immutable per-instance precomputation shared read-only by all workers.
/// Candidates are indexed in the order given (ascending speed in practice);
/// candidate sets are bit vectors over those indices.
class SearchContext {
 public:
  SearchContext(const CoverTable& table, std::span<const Candidate> candidates, const ConditionProfile& profile);

  const InstanceParams& params() const { return table_.params(); }
  const ConditionProfile& profile() const { return profile_; }
  unsigned k() const { return params().k; }

  std::size_t candidate_count() const { return candidates_.size(); }
  std::size_t target_count() const { return params().half; }
  std::size_t target_words() const { return target_words_; }
  std::size_t candidate_words() const { return candidate_words_; }

  const Candidate& candidate(std::size_t ci) const { return candidates_[ci]; }
  /// Coverage of candidate ci over targets (bit j-1 for target j).
  std::span<const bits::Word> row(std::size_t ci) const {
    return {rows_.data() + ci * target_words_, target_words_};
  }
  /// Candidates covering target j (0-based bit index j-1).
  std::span<const bits::Word> column(std::size_t target_bit) const {
    return {columns_.data() + target_bit * candidate_words_, candidate_words_};
  }
  std::span<const bits::Word> full_targets() const { return full_targets_; }
  std::span<const bits::Word> all_candidates() const { return all_candidates_; }

  std::span<const bits::Word> prime_mask(std::size_t prime_index) const {
    return {prime_masks_.data() + prime_index * candidate_words_, candidate_words_};
  }
  std::span<const bits::Word> div3_mask() const { return div3_mask_; }
  std::span<const bits::Word> div9_mask() const { return div9_mask_; }
  /// Candidates with valp >= t, for t in 1..a.
  std::span<const bits::Word> valp_at_least(unsigned t) const {
    return {valp_masks_.data() + (t - 1) * candidate_words_, candidate_words_};
  }

 private:
  const CoverTable& table_;
  ConditionProfile profile_;
  std::vector<Candidate> candidates_;
  std::size_t target_words_ = 0;
  std::size_t candidate_words_ = 0;
  std::vector<bits::Word> rows_;
  std::vector<bits::Word> columns_;
  std::vector<bits::Word> full_targets_;
  std::vector<bits::Word> all_candidates_;
  std::vector<bits::Word> prime_masks_;
  std::vector<bits::Word> div3_mask_;
  std::vector<bits::Word> div9_mask_;
  std::vector<bits::Word> valp_masks_;
};

/// A partial tuple with per-depth coverage and candidate pools.
///
/// available() at depth i is the pool for the (i+1)-th element: candidates
/// not yet chosen, admitted by the current counters, minus exclusions learned
/// at this depth. Pools only shrink going down: available[i+1] is a subset of
/// available[i].
class SearchState {
 public:
  explicit SearchState(const SearchContext& ctx);

  /// Top level of a state, enough to resume the search below it. A state
  /// rebuilt from a snapshot cannot be popped above the snapshot depth.
  struct Snapshot {
    std::vector<std::uint32_t> chosen;
    std::vector<bits::Word> covered;
    std::vector<bits::Word> available;
    TupleCounters counters;
  };
  SearchState(const SearchContext& ctx, const Snapshot& snapshot);
  Snapshot snapshot() const;

  unsigned depth() const { return static_cast<unsigned>(chosen_.size()); }
  std::span<const std::uint32_t> chosen() const { return chosen_; }
  std::span<const bits::Word> covered() const { return level(covered_, tw_); }
  std::span<const bits::Word> available() const { return level(available_, cw_); }
  const TupleCounters& counters() const { return counters_; }

  std::size_t uncovered_count() const;
  bool complete() const;

  /// Adds candidate ci (must be in available()).
  void push(std::uint32_t ci);
  void pop();
  /// Removes ci from the pool of the current depth; undone when the depth is
  /// popped.
  void learn_exclusion(std::uint32_t ci);

  /// Chosen speeds, ascending.
  std::vector<std::uint64_t> chosen_speeds() const;

 private:
  std::span<const bits::Word> level(const std::vector<bits::Word>& v, std::size_t w) const {
    return {v.data() + chosen_.size() * w, w};
  }
  std::span<bits::Word> level(std::vector<bits::Word>& v, std::size_t w, std::size_t d) {
    return {v.data() + d * w, w};
  }

  const SearchContext* ctx_;
  std::size_t tw_;
  std::size_t cw_;
  std::vector<std::uint32_t> chosen_;
  std::vector<bits::Word> covered_;    // (k+1) levels
  std::vector<bits::Word> available_;  // (k+1) levels
  TupleCounters counters_;
};

/// Uncovered target (1-based) with the fewest covering candidates left in
/// the pool; ties go to the smallest target. Requires !state.complete().
std::uint64_t select_pivot(const SearchState& state, const SearchContext& ctx);

/// Smallest uncovered target; the pivot rule with MRV disabled.
std::uint64_t first_uncovered(const SearchState& state);

/// Prune test for a state that just received its newest element x. With U
/// targets uncovered, r = k - depth slots left and s the most new targets any
/// pooled candidate covers, the branch is hopeless iff s * r < U.
bool extension_hopeless(const SearchState& child, const SearchContext& ctx);

/// Same test evaluated for adding x to state (state is left unchanged).
bool prune_extension(SearchState& state, std::uint32_t x, const SearchContext& ctx);

/// Exhaustive search for a bad cover: at most k distinct candidates meeting
/// the profile's caps whose rows cover every target. Verified means none
/// exists. Any witness is re-validated directly and a failed validation
/// throws std::logic_error.
SearchOutcome find_bad_cover(const CoverTable& table, std::span<const Candidate> candidates,
                             const ConditionProfile& profile, const SearchOptions& options = {});

}  // namespace lrc
