#include "lrc/search.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lrc/errors.hpp"

namespace lrc {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Verified: return "Verified";
    case Verdict::CounterexampleFound: return "CounterexampleFound";
    case Verdict::Aborted: return "Aborted";
  }
  return "Aborted";
}

Verdict parse_verdict(const std::string& text) {
  if (text == "Verified") return Verdict::Verified;
  if (text == "CounterexampleFound") return Verdict::CounterexampleFound;
  if (text == "Aborted") return Verdict::Aborted;
  throw FormatError("unknown verdict '" + text + "'");
}

// ---------------------------------------------------------------------------
// SearchContext

SearchContext::SearchContext(const CoverTable& table, std::span<const Candidate> candidates,
                             const ConditionProfile& profile)
    : table_(table), profile_(profile), candidates_(candidates.begin(), candidates.end()) {
  const auto& params = table.params();
  if (profile.k() != params.k) throw UsageError("profile and table disagree on k");
  for (const auto& cand : candidates_)
    if (cand.v < 1 || cand.v > params.half) throw UsageError("candidate speed outside 1..half");
  if (candidates_.size() > std::numeric_limits<std::uint32_t>::max()) throw UsageError("too many candidates");

  target_words_ = bits::words_for(params.half);
  candidate_words_ = bits::words_for(std::max<std::size_t>(candidates_.size(), 1));
  const std::size_t n = candidates_.size();

  rows_.resize(n * target_words_);
  columns_.assign(params.half * candidate_words_, 0);
  for (std::size_t ci = 0; ci < n; ++ci) {
    auto src = table.row(candidates_[ci].v);
    std::copy(src.begin(), src.end(), rows_.begin() + static_cast<std::ptrdiff_t>(ci * target_words_));
    bits::for_each_set(src, [&](std::size_t t) {
      bits::set(std::span<bits::Word>{columns_.data() + t * candidate_words_, candidate_words_}, ci);
    });
  }

  full_targets_.resize(target_words_);
  bits::fill_prefix(full_targets_, params.half);
  all_candidates_.resize(candidate_words_);
  bits::fill_prefix(all_candidates_, n);

  const std::size_t nprimes = params.modulus_primes.size();
  prime_masks_.assign(nprimes * candidate_words_, 0);
  div3_mask_.assign(candidate_words_, 0);
  div9_mask_.assign(candidate_words_, 0);
  const unsigned a = params.divisor.a;
  valp_masks_.assign(a * candidate_words_, 0);
  for (std::size_t ci = 0; ci < n; ++ci) {
    const auto& cand = candidates_[ci];
    for (std::size_t i = 0; i < nprimes; ++i)
      if (cand.shares >> i & 1)
        bits::set(std::span<bits::Word>{prime_masks_.data() + i * candidate_words_, candidate_words_}, ci);
    if (cand.div3) bits::set(div3_mask_, ci);
    if (cand.div9) bits::set(div9_mask_, ci);
    for (unsigned t = 1; t <= cand.valp && t <= a; ++t)
      bits::set(std::span<bits::Word>{valp_masks_.data() + (t - 1) * candidate_words_, candidate_words_}, ci);
  }
}

// ---------------------------------------------------------------------------
// SearchState

SearchState::SearchState(const SearchContext& ctx)
    : ctx_(&ctx),
      tw_(ctx.target_words()),
      cw_(ctx.candidate_words()),
      covered_((ctx.k() + 1) * tw_, 0),
      available_((ctx.k() + 1) * cw_, 0),
      counters_(ctx.params()) {
  chosen_.reserve(ctx.k());
  // Candidates the caller passed that fail the caps on their own never enter
  // the pool.
  auto root = level(available_, cw_, 0);
  const TupleCounters empty(ctx.params());
  for (std::size_t ci = 0; ci < ctx.candidate_count(); ++ci)
    if (admits(empty, ctx.candidate(ci), ctx.profile())) bits::set(root, ci);
}

SearchState::SearchState(const SearchContext& ctx, const Snapshot& snapshot) : SearchState(ctx) {
  if (snapshot.chosen.size() > ctx.k() || snapshot.covered.size() != tw_ || snapshot.available.size() != cw_)
    throw UsageError("snapshot does not match search context");
  chosen_ = snapshot.chosen;
  counters_ = snapshot.counters;
  std::copy(snapshot.covered.begin(), snapshot.covered.end(), level(covered_, tw_, chosen_.size()).begin());
  std::copy(snapshot.available.begin(), snapshot.available.end(), level(available_, cw_, chosen_.size()).begin());
}

SearchState::Snapshot SearchState::snapshot() const {
  auto cov = covered();
  auto av = available();
  return {chosen_, {cov.begin(), cov.end()}, {av.begin(), av.end()}, counters_};
}

std::size_t SearchState::uncovered_count() const {
  return ctx_->target_count() - bits::popcount(covered());
}

bool SearchState::complete() const { return std::ranges::equal(covered(), ctx_->full_targets()); }

void SearchState::push(std::uint32_t ci) {
  const std::size_t d = chosen_.size();
  if (d >= ctx_->k()) throw std::logic_error("push beyond k elements");
  auto cov_from = level(covered_, tw_, d);
  auto cov_to = level(covered_, tw_, d + 1);
  auto row = ctx_->row(ci);
  for (std::size_t i = 0; i < tw_; ++i) cov_to[i] = cov_from[i] | row[i];

  auto av_from = level(available_, cw_, d);
  auto av_to = level(available_, cw_, d + 1);
  std::copy(av_from.begin(), av_from.end(), av_to.begin());
  bits::clear(av_to, ci);

  const Candidate& cand = ctx_->candidate(ci);
  counters_.add(cand);
  chosen_.push_back(ci);

  // Counters only grow along a path, so it is enough to drop the classes
  // this element just saturated.
  const auto& profile = ctx_->profile();
  auto andnot = [&](std::span<const bits::Word> mask) {
    for (std::size_t i = 0; i < cw_; ++i) av_to[i] &= ~mask[i];
  };
  auto caps = profile.prime_caps();
  for (std::size_t i = 0; i < caps.size(); ++i)
    if ((cand.shares >> i & 1) && counters_.per_prime[i] >= caps[i]) andnot(ctx_->prime_mask(i));
  if (profile.three_cap() && cand.div3 && counters_.div3 >= *profile.three_cap()) andnot(ctx_->div3_mask());
  if (profile.nine_cap() && cand.div9 && counters_.div9 >= *profile.nine_cap()) andnot(ctx_->div9_mask());
  if (cand.valp > 0) {
    unsigned left = profile.valuation_cap() - counters_.total_valp;
    if (left + 1 <= ctx_->params().divisor.a) andnot(ctx_->valp_at_least(left + 1));
  }
}

void SearchState::pop() {
  if (chosen_.empty()) throw std::logic_error("pop on empty state");
  counters_.remove(ctx_->candidate(chosen_.back()));
  chosen_.pop_back();
}

void SearchState::learn_exclusion(std::uint32_t ci) { bits::clear(level(available_, cw_, chosen_.size()), ci); }

std::vector<std::uint64_t> SearchState::chosen_speeds() const {
  std::vector<std::uint64_t> out;
  for (auto ci : chosen_) out.push_back(ctx_->candidate(ci).v);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Heuristics

std::uint64_t select_pivot(const SearchState& state, const SearchContext& ctx) {
  auto covered = state.covered();
  auto full = ctx.full_targets();
  auto pool = state.available();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::uint64_t best_target = 0;
  for (std::size_t w = 0; w < covered.size(); ++w) {
    bits::Word open = full[w] & ~covered[w];
    while (open) {
      std::size_t t = w * 64 + static_cast<std::size_t>(std::countr_zero(open));
      open &= open - 1;
      std::size_t n = bits::popcount_and(ctx.column(t), pool);
      if (n < best) {
        best = n;
        best_target = t + 1;
        if (n == 0) return best_target;
      }
    }
  }
  if (best_target == 0) throw std::logic_error("select_pivot on a complete cover");
  return best_target;
}

std::uint64_t first_uncovered(const SearchState& state) {
  auto covered = state.covered();
  for (std::size_t w = 0; w < covered.size(); ++w)
    if (~covered[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(~covered[w])) + 1;
  throw std::logic_error("first_uncovered on a complete cover");
}

bool extension_hopeless(const SearchState& child, const SearchContext& ctx) {
  const std::size_t uncovered = child.uncovered_count();
  if (uncovered == 0) return false;
  const std::size_t slots = ctx.k() - child.depth();
  if (slots == 0) return true;
  // s * slots < U  <=>  s < ceil(U / slots); stop at the first candidate
  // reaching that many new targets. The decision equals the one made with
  // the exact maximum s.
  const std::size_t need = (uncovered + slots - 1) / slots;
  auto covered = child.covered();
  bool hopeless = true;
  auto pool = child.available();
  for (std::size_t w = 0; w < pool.size() && hopeless; ++w) {
    bits::Word x = pool[w];
    while (x) {
      std::size_t ci = w * 64 + static_cast<std::size_t>(std::countr_zero(x));
      x &= x - 1;
      if (bits::popcount_andnot(ctx.row(ci), covered) >= need) {
        hopeless = false;
        break;
      }
    }
  }
  return hopeless;
}

bool prune_extension(SearchState& state, std::uint32_t x, const SearchContext& ctx) {
  state.push(x);
  bool hopeless = extension_hopeless(state, ctx);
  state.pop();
  return hopeless;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::size_t kNoTask = std::numeric_limits<std::size_t>::max();

// State shared by all workers of one search.
struct Control {
  Clock::time_point start = Clock::now();
  std::optional<Clock::time_point> deadline;
  const std::atomic<bool>* cancel = nullptr;
  std::atomic<bool> timed_out{false};
  std::atomic<bool> cancelled{false};
  std::atomic<std::size_t> first_witness_task{kNoTask};
  std::mutex progress_mutex;
};

enum class Step { Exhausted, Found, Stopped };

class Engine {
 public:
  Engine(const SearchContext& ctx, const SearchOptions& options, Control& control)
      : ctx_(ctx),
        options_(options),
        control_(control),
        branch_((ctx.k() + 1) * ctx.candidate_words()),
        gains_(ctx.k() + 1) {
    for (auto& g : gains_) g.reserve(ctx.candidate_count());
  }

  // Explores the subtree below state. task orders this subtree among
  // parallel work units; a witness in an earlier unit stops later ones.
  Step explore(SearchState& state, std::size_t task = kNoTask) {
    task_ = task;
    return node(state);
  }

  // Expands the tree down to split_depth, handing each subtree at that depth
  // to emit(). Exclusions learned along the way are exactly those the serial
  // search would have learned, so work units are independent.
  template <typename Emit>
  Step expand(SearchState& state, unsigned split_depth, Emit&& emit) {
    ++stats.nodes;
    const unsigned depth = state.depth();
    auto branch = branch_set(state);
    for (std::size_t w = 0; w < branch.size(); ++w) {
      bits::Word x = branch[w];
      while (x) {
        auto ci = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        state.push(ci);
        if (state.complete()) {
          emit(state, true);
          return Step::Found;
        }
        if (options_.prune && extension_hopeless(state, ctx_)) {
          ++stats.prune_hits;
        } else if (depth + 1 >= split_depth) {
          emit(state, false);
        } else if (expand(state, split_depth, emit) == Step::Found) {
          return Step::Found;
        }
        state.pop();
        if (options_.learn_exclusions) {
          state.learn_exclusion(ci);
          ++stats.exclusions;
        }
      }
    }
    return Step::Exhausted;
  }

  SearchStats stats;
  std::vector<std::uint64_t> witness;

 private:
  // Candidates covering the pivot, copied out of the pool so exclusions
  // learned while iterating do not disturb the loop.
  std::span<bits::Word> branch_set(const SearchState& state) {
    const std::size_t cw = ctx_.candidate_words();
    std::span<bits::Word> out{branch_.data() + state.depth() * cw, cw};
    std::uint64_t u = options_.pivot_mrv ? select_pivot(state, ctx_) : first_uncovered(state);
    auto column = ctx_.column(u - 1);
    auto pool = state.available();
    for (std::size_t i = 0; i < cw; ++i) out[i] = column[i] & pool[i];
    return out;
  }

  bool should_stop() {
    if (control_.timed_out.load(std::memory_order_relaxed) || control_.cancelled.load(std::memory_order_relaxed))
      return true;
    if (task_ != kNoTask && control_.first_witness_task.load(std::memory_order_relaxed) < task_) return true;
    if (control_.cancel && control_.cancel->load(std::memory_order_relaxed)) {
      control_.cancelled = true;
      return true;
    }
    if (control_.deadline && Clock::now() >= *control_.deadline) {
      control_.timed_out = true;
      return true;
    }
    return false;
  }

  Step node(SearchState& state) {
    ++stats.nodes;
    if ((stats.nodes & 0xfff) == 0 && should_stop()) return Step::Stopped;
    const unsigned depth = state.depth();
    if (depth >= ctx_.k()) return Step::Exhausted;

    auto branch = branch_set(state);
    const std::size_t uncovered = state.uncovered_count();
    const std::size_t slots = ctx_.k() - depth - 1;  // left after the child's element
    std::span<Gain> gains;
    if (options_.prune && options_.shared_gains && slots > 0) gains = rank_gains(state, branch, uncovered, slots);

    std::size_t done = 0;
    const std::size_t total = depth == 0 && task_ == kNoTask ? bits::popcount(branch) : 0;
    for (std::size_t w = 0; w < branch.size(); ++w) {
      bits::Word x = branch[w];
      while (x) {
        auto ci = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        state.push(ci);
        if (state.complete()) {
          witness = state.chosen_speeds();
          return Step::Found;
        }
        bool hopeless = false;
        if (options_.prune)
          hopeless = options_.shared_gains && slots > 0 ? hopeless_ranked(state, gains, slots)
                                                        : extension_hopeless(state, ctx_);
        if (hopeless) {
          ++stats.prune_hits;
        } else {
          Step step = node(state);
          if (step != Step::Exhausted) return step;
        }
        state.pop();
        if (options_.learn_exclusions) {
          state.learn_exclusion(ci);
          ++stats.exclusions;
        }
        if (total && options_.progress) {
          std::chrono::duration<double> elapsed = Clock::now() - control_.start;
          options_.progress(ProgressEvent{done++, total, stats.nodes, elapsed.count()});
        }
      }
    }
    return Step::Exhausted;
  }

  struct Gain {
    std::uint32_t ci;
    std::uint32_t gain;  // new targets relative to the parent's coverage
  };

  // Gains of every pooled candidate relative to the parent node, keeping
  // only those that could meet the smallest threshold any child can have,
  // sorted by decreasing gain. A child's pool is a subset of this pool and
  // its gains are bounded by these, so scanning this list decides the prune
  // test exactly.
  std::span<Gain> rank_gains(const SearchState& state, std::span<const bits::Word> branch, std::size_t uncovered,
                             std::size_t slots) {
    auto& list = gains_[state.depth()];
    list.clear();
    auto covered = state.covered();
    std::size_t best_branch_gain = 0;
    bits::for_each_set(state.available(), [&](std::size_t ci) {
      auto g = static_cast<std::uint32_t>(bits::popcount_andnot(ctx_.row(ci), covered));
      list.push_back({static_cast<std::uint32_t>(ci), g});
      if (bits::test(branch, ci)) best_branch_gain = std::max<std::size_t>(best_branch_gain, g);
    });
    const std::size_t least_left = uncovered - std::min(uncovered, best_branch_gain);
    const std::size_t least_need = (least_left + slots - 1) / slots;
    std::erase_if(list, [&](const Gain& g) { return g.gain < least_need; });
    std::sort(list.begin(), list.end(), [](const Gain& a, const Gain& b) {
      return a.gain != b.gain ? a.gain > b.gain : a.ci < b.ci;
    });
    return list;
  }

  bool hopeless_ranked(const SearchState& child, std::span<const Gain> gains, std::size_t slots) {
    const std::size_t uncovered = child.uncovered_count();
    const std::size_t need = (uncovered + slots - 1) / slots;
    auto covered = child.covered();
    auto pool = child.available();
    for (const auto& g : gains) {
      if (g.gain < need) break;
      if (!bits::test(pool, g.ci)) continue;
      if (bits::popcount_andnot(ctx_.row(g.ci), covered) >= need) return false;
    }
    return true;
  }

  const SearchContext& ctx_;
  const SearchOptions& options_;
  Control& control_;
  std::vector<bits::Word> branch_;
  std::vector<std::vector<Gain>> gains_;
  std::size_t task_ = kNoTask;
};

struct WorkUnit {
  SearchState::Snapshot snapshot;
  std::optional<std::vector<std::uint64_t>> immediate_witness;
};

SearchOutcome run_parallel(const SearchContext& ctx, const SearchOptions& options, Control& control) {
  SearchOutcome outcome;
  const unsigned split = std::clamp(options.split_depth, 1u, ctx.k() - 1);

  std::vector<WorkUnit> units;
  Engine frontier(ctx, options, control);
  {
    SearchState root(ctx);
    if (!root.complete()) {
      frontier.expand(root, split, [&](const SearchState& s, bool complete) {
        WorkUnit unit{s.snapshot(), std::nullopt};
        if (complete) unit.immediate_witness = s.chosen_speeds();
        units.push_back(std::move(unit));
      });
    }
  }
  outcome.stats = frontier.stats;

  std::atomic<std::size_t> next{0};
  std::mutex merge;
  std::vector<std::optional<std::vector<std::uint64_t>>> found(units.size());
  std::atomic<std::uint64_t> nodes_done{frontier.stats.nodes};

  auto worker = [&] {
    Engine engine(ctx, options, control);
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= units.size()) break;
      if (control.first_witness_task.load() < i || control.timed_out || control.cancelled) continue;
      Step step;
      if (units[i].immediate_witness) {
        engine.witness = *units[i].immediate_witness;
        step = Step::Found;
      } else {
        SearchState state(ctx, units[i].snapshot);
        std::uint64_t before = engine.stats.nodes;
        step = engine.explore(state, i);
        nodes_done += engine.stats.nodes - before;
      }
      if (step == Step::Found) {
        found[i] = engine.witness;
        std::size_t cur = control.first_witness_task.load();
        while (i < cur && !control.first_witness_task.compare_exchange_weak(cur, i)) {
        }
      }
      if (options.progress) {
        std::lock_guard lock(control.progress_mutex);
        std::chrono::duration<double> elapsed = Clock::now() - control.start;
        options.progress(ProgressEvent{i, units.size(), nodes_done.load(), elapsed.count()});
      }
    }
    std::lock_guard lock(merge);
    outcome.stats.nodes += engine.stats.nodes;
    outcome.stats.prune_hits += engine.stats.prune_hits;
    outcome.stats.exclusions += engine.stats.exclusions;
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < options.workers; ++t) pool.emplace_back(worker);
  }

  std::size_t first = control.first_witness_task.load();
  if (first != kNoTask) {
    outcome.verdict = Verdict::CounterexampleFound;
    outcome.witness = found[first];
  } else if (control.timed_out || control.cancelled) {
    outcome.verdict = Verdict::Aborted;
  } else {
    outcome.verdict = Verdict::Verified;
  }
  return outcome;
}

}  // namespace

SearchOutcome find_bad_cover(const CoverTable& table, std::span<const Candidate> candidates,
                             const ConditionProfile& profile, const SearchOptions& options) {
  if (options.workers < 1) throw UsageError("workers must be >= 1");
  Control control;
  if (options.timeout) control.deadline = control.start + *options.timeout;
  control.cancel = options.cancel;

  SearchContext ctx(table, candidates, profile);
  SearchOutcome outcome;

  if (options.workers == 1 || ctx.k() < 2) {
    Engine engine(ctx, options, control);
    SearchState root(ctx);
    Step step = root.complete() ? Step::Exhausted : engine.explore(root);
    outcome.stats = engine.stats;
    if (step == Step::Found) {
      outcome.verdict = Verdict::CounterexampleFound;
      outcome.witness = engine.witness;
    } else {
      outcome.verdict = step == Step::Stopped ? Verdict::Aborted : Verdict::Verified;
    }
  } else {
    outcome = run_parallel(ctx, options, control);
  }

  if (outcome.verdict == Verdict::Aborted)
    outcome.abort_reason = control.timed_out ? "timeout" : "cancelled";
  std::chrono::duration<double> elapsed = Clock::now() - control.start;
  outcome.stats.seconds = elapsed.count();

  if (outcome.witness && !is_bad_cover(*outcome.witness, table.params(), profile))
    throw std::logic_error("internal error: search witness failed direct validation");
  return outcome;
}

}  // namespace lrc
