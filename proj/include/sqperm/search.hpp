#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "sqperm/crucial.hpp"
#include "sqperm/permutation.hpp"
#include "sqperm/squares.hpp"

namespace sqperm {

struct SearchStats {
  uint64_t nodes = 0;  // nodes that passed all prune tests
  uint64_t pruned_square = 0;
  uint64_t pruned_bound = 0;
  uint64_t pruned_symmetry = 0;
  uint64_t pruned_phase = 0;
  uint64_t leaves = 0;  // accepted nodes at the target length
  double wall_seconds = 0.0;

  void merge(const SearchStats& o) {
    nodes += o.nodes;
    pruned_square += o.pruned_square;
    pruned_bound += o.pruned_bound;
    pruned_symmetry += o.pruned_symmetry;
    pruned_phase += o.pruned_phase;
    leaves += o.leaves;
  }
};

/// DFS cursor over the prefix-pattern tree of permutations.
///
/// The children of a permutation of length d are the d+1 permutations of
/// length d+1 whose length-d prefix has the parent's pattern. The first child
/// appends the entry d; each following sibling swaps the values x and x-1,
/// where x is the currently appended value; after the x = 0 child, pop()
/// removes the last entry and decrements every remaining entry.
class SearchNode {
 public:
  SearchNode() = default;

  explicit SearchNode(std::span<const int> seed) : perm_(seed.begin(), seed.end()) {
    pos_.resize(perm_.size());
    for (size_t i = 0; i < perm_.size(); ++i) pos_[static_cast<size_t>(perm_[i])] = static_cast<int>(i);
  }

  int size() const { return static_cast<int>(perm_.size()); }
  std::span<const int> view() const { return perm_; }
  int last() const { return perm_.back(); }

  void push_max() {
    const int d = size();
    perm_.push_back(d);
    pos_.push_back(d);
  }

  // Moves to the next sibling (appended value x becomes x-1). Requires last() > 0.
  void shift_sibling() {
    const int x = perm_.back();
    const int i = pos_[static_cast<size_t>(x)];
    const int j = pos_[static_cast<size_t>(x - 1)];
    std::swap(perm_[static_cast<size_t>(i)], perm_[static_cast<size_t>(j)]);
    std::swap(pos_[static_cast<size_t>(x)], pos_[static_cast<size_t>(x - 1)]);
  }

  // Removes the appended entry and renormalizes back to the parent pattern.
  void pop() {
    const int x = perm_.back();
    perm_.pop_back();
    pos_.pop_back();
    for (size_t i = 0; i < perm_.size(); ++i) {
      if (perm_[i] > x) --perm_[i];
      pos_[static_cast<size_t>(perm_[i])] = static_cast<int>(i);
    }
  }

 private:
  std::vector<int> perm_;
  std::vector<int> pos_;  // pos_[value] = index
};

/// Start-phase filter on the first steps of a permutation.
enum class StartPhase { Any, Up, UpUp };

namespace detail {

// ---------------------------------------------------------------------------
// Lower bound on the length of a left-crucial permutation with a given prefix
// ---------------------------------------------------------------------------

// Smallest multiple of 4 with (n+1)/2 < k < n such that the first k entries of
// the extended permutation xs (length n+1) are order-isomorphic, after
// truncation, to the entries from position k on.
inline std::optional<int> partial_square_k_span(std::span<const int> xs) {
  const int n = static_cast<int>(xs.size()) - 1;
  for (int k = 4; k < n; k += 4) {
    if (2 * k <= n + 1) continue;
    if (order_isomorphic(xs.first(static_cast<size_t>(n + 1 - k)),
                         xs.subspan(static_cast<size_t>(k)))) {
      return k;
    }
  }
  return std::nullopt;
}

// Lower bound on |tau| over left-crucial tau whose length-n prefix has the
// pattern p (p itself square-free, n >= 3). Each prepended value x gives a
// candidate:
//   - the extension already has a square: no constraint;
//   - a partial square at k: the completed square forces |tau| >= 2k-1;
//   - no partial square: the square created by prepending x must cover the
//     whole extension. When n is a multiple of 4 its half may have length
//     exactly n (no witness visible), giving 2n-1. Otherwise the half length
//     is at least m = 4*ceil((n+1)/4), and distinct prepends in this group
//     need squares of distinct lengths, so t of them force 2m + 8(t-1) - 1.
// The bound is the maximum candidate, 0 if every prepend already has a square.
inline int left_crucial_lower_bound_span(std::span<const int> p) {
  const int n = static_cast<int>(p.size());
  thread_local std::vector<int> ext;
  int best = 0;
  int t = 0;
  for (int x = 0; x <= n; ++x) {
    fill_left_extension(p, x, ext);
    if (square_at_front(ext)) continue;
    if (auto k = partial_square_k_span(ext)) {
      best = std::max(best, 2 * *k - 1);
    } else if (n % 4 == 0) {
      best = std::max(best, 2 * n - 1);
    } else {
      ++t;
    }
  }
  if (t >= 1) {
    const int m = ((n + 4) / 4) * 4;
    best = std::max(best, 2 * m + 8 * (t - 1) - 1);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Central-window canonicalization for odd target lengths
// ---------------------------------------------------------------------------

// The symmetry group {id, reverse, complement, reverse-complement} maps the
// window centered at (n-1)/2 to itself, so comparing the window's pattern
// against its own three transforms decides, consistently across an orbit,
// which member survives. Returns -1 to prune, +1 when the pattern is the
// strict minimum (no further checks needed on this branch), 0 otherwise.
inline int central_window_check(std::span<const int> p, int n) {
  const int c = (n - 1) / 2;
  const int len = static_cast<int>(p.size());
  const int w = len - 1 - c;
  const int width = 2 * w + 1;
  const int lo = c - w;
  thread_local std::vector<int> pat;
  pat.resize(static_cast<size_t>(width));
  for (int i = 0; i < width; ++i) {
    int r = 0;
    const int vi = p[static_cast<size_t>(lo + i)];
    for (int j = 0; j < width; ++j) r += p[static_cast<size_t>(lo + j)] < vi;
    pat[static_cast<size_t>(i)] = r;
  }
  bool strict = true;
  // lexicographic compare of pat against each transform, computed on the fly
  auto consider = [&](auto&& at) -> int {  // -1 prune, 0 tie, 1 strictly less
    for (int i = 0; i < width; ++i) {
      const int a = pat[static_cast<size_t>(i)];
      const int b = at(i);
      if (a < b) return 1;
      if (a > b) return -1;
    }
    return 0;
  };
  const int W1 = width - 1;
  int c1 = consider([&](int i) { return pat[static_cast<size_t>(W1 - i)]; });          // reverse
  if (c1 < 0) return -1;
  int c2 = consider([&](int i) { return W1 - pat[static_cast<size_t>(i)]; });          // complement
  if (c2 < 0) return -1;
  int c3 = consider([&](int i) { return W1 - pat[static_cast<size_t>(W1 - i)]; });     // both
  if (c3 < 0) return -1;
  if (c1 == 0 || c2 == 0 || c3 == 0) strict = false;
  return strict ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

struct EngineOptions {
  int max_len = 0;
  StartPhase phase = StartPhase::Any;
  int bound_cutoff = 0;      // prune when the left-crucial lower bound reaches this; 0 = off
  int sym_n = 0;             // odd target length for central-window canonicalization; 0 = off
  uint64_t node_budget = 0;  // generated-node budget; 0 = unlimited
  int split_depth = 0;       // frontier depth for parallel runs; 0 = sequential
  int threads = 1;
  std::atomic<bool>* stop = nullptr;  // cooperative early stop
};

template <class Leaf>
class Engine {
 public:
  Engine(const EngineOptions& opt, Leaf& leaf, std::atomic<uint64_t>* generated,
         std::atomic<bool>* exhausted)
      : opt_(opt), leaf_(leaf), generated_(generated), exhausted_(exhausted) {}

  SearchStats stats;

  // node holds an accepted permutation; explores all descendants.
  void descend(SearchNode& node, bool sym_done) {
    const int d = node.size();
    node.push_max();
    for (int x = d;; --x) {
      bool child_sym_done = sym_done;
      if (accept(node.view(), child_sym_done)) {
        if (node.size() == opt_.max_len) {
          ++stats.leaves;
          leaf_(node.view());
        } else {
          descend(node, child_sym_done);
        }
      }
      if (x == 0) break;
      node.shift_sibling();
    }
    node.pop();
  }

  bool accept(std::span<const int> p, bool& sym_done) {
    if (opt_.stop && opt_.stop->load(std::memory_order_relaxed)) return false;
    if (generated_) {
      const uint64_t g = generated_->fetch_add(1, std::memory_order_relaxed) + 1;
      if (opt_.node_budget && g > opt_.node_budget) {
        if (exhausted_) exhausted_->store(true, std::memory_order_relaxed);
        if (opt_.stop) opt_.stop->store(true, std::memory_order_relaxed);
        return false;
      }
    }
    const int len = static_cast<int>(p.size());
    if (opt_.phase != StartPhase::Any) {
      if (len == 2 && !(p[0] < p[1])) {
        ++stats.pruned_phase;
        return false;
      }
      if (len == 3 && opt_.phase == StartPhase::UpUp && !(p[1] < p[2])) {
        ++stats.pruned_phase;
        return false;
      }
    }
    if (square_at_back(p)) {
      ++stats.pruned_square;
      return false;
    }
    if (opt_.sym_n && !sym_done && len >= (opt_.sym_n + 1) / 2) {
      const int r = central_window_check(p, opt_.sym_n);
      if (r < 0) {
        ++stats.pruned_symmetry;
        return false;
      }
      if (r > 0) sym_done = true;
    }
    if (opt_.bound_cutoff && len >= 3 && len < opt_.max_len) {
      if (left_crucial_lower_bound_span(p) >= opt_.bound_cutoff) {
        ++stats.pruned_bound;
        return false;
      }
    }
    ++stats.nodes;
    return true;
  }

 private:
  const EngineOptions& opt_;
  Leaf& leaf_;
  std::atomic<uint64_t>* generated_;
  std::atomic<bool>* exhausted_;
};

// Runs the engine from a seed prefix (itself not tested) to max_len.
// The leaf callback must be thread-safe when opt.threads > 1.
template <class Leaf>
inline SearchStats run_engine(const EngineOptions& opt, Leaf&& leaf, bool* budget_exhausted = nullptr,
                              std::span<const int> seed = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<uint64_t> generated{0};
  std::atomic<bool> exhausted{false};
  std::atomic<bool> local_stop{false};
  EngineOptions opt_local = opt;
  if (!opt_local.stop) opt_local.stop = &local_stop;
  std::atomic<uint64_t>* gen = opt.node_budget ? &generated : nullptr;

  SearchStats total;
  int split = opt_local.split_depth;
  if (opt_local.sym_n) split = std::min(split, (opt_local.sym_n + 1) / 2 - 1);
  const bool parallel = opt_local.threads > 1 && split > 0 && split < opt_local.max_len &&
                        static_cast<int>(seed.size()) < split;

  if (!parallel) {
    Engine<Leaf> eng(opt_local, leaf, gen, &exhausted);
    SearchNode node(seed);
    if (static_cast<int>(seed.size()) >= opt_local.max_len) {
      // degenerate: nothing to extend
    } else {
      eng.descend(node, false);
    }
    total = eng.stats;
  } else {
    // Collect the frontier sequentially, then give each frontier prefix to a worker.
    std::vector<std::vector<int>> frontier;
    {
      EngineOptions fopt = opt_local;
      fopt.max_len = split;
      auto collect = [&frontier](std::span<const int> p) {
        frontier.emplace_back(p.begin(), p.end());
      };
      Engine<decltype(collect)> eng(fopt, collect, gen, &exhausted);
      SearchNode node(seed);
      eng.descend(node, false);
      total = eng.stats;
      total.leaves = 0;  // frontier nodes are not leaves of the full search
    }
    std::atomic<size_t> next{0};
    std::mutex merge_mu;
    auto worker = [&]() {
      SearchStats local;
      for (;;) {
        const size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= frontier.size()) break;
        Engine<Leaf> eng(opt_local, leaf, gen, &exhausted);
        SearchNode node(std::span<const int>(frontier[i]));
        eng.descend(node, false);
        local.merge(eng.stats);
      }
      std::scoped_lock lk(merge_mu);
      total.merge(local);
    };
    std::vector<std::thread> pool;
    const int nthreads = std::max(1, opt_local.threads);
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (budget_exhausted) *budget_exhausted = exhausted.load();
  total.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return total;
}

}  // namespace detail

/// Tuning knobs shared by the search and counting front ends.
struct SearchTuning {
  int threads = 0;       // 0 = default (SQPERM_THREADS or hardware)
  int split_depth = 6;   // DFS depth at which the tree is split across workers
  uint64_t node_budget = 0;
};

inline int default_thread_count() {
  if (const char* env = std::getenv("SQPERM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

inline int resolve_threads(const SearchTuning& t) {
  return t.threads >= 1 ? t.threads : default_thread_count();
}

/// Depth-first traversal of the prefix-pattern tree up to max_len. The pruner
/// runs on every generated node; pruned nodes are neither visited nor
/// extended. The visitor runs on every surviving node, of any length.
inline SearchStats dfs_traverse(int max_len, const std::function<bool(const Permutation&)>& pruner,
                                const std::function<void(const Permutation&)>& visitor) {
  if (max_len < 1) throw InvalidInput("max_len must be at least 1");
  SearchStats stats;
  const auto t0 = std::chrono::steady_clock::now();
  SearchNode node;
  auto walk = [&](auto&& self) -> void {
    const int d = node.size();
    node.push_max();
    for (int x = d;; --x) {
      auto perm = Permutation::unchecked(std::vector<int>(node.view().begin(), node.view().end()));
      if (pruner && pruner(perm)) {
        ++stats.pruned_square;
      } else {
        ++stats.nodes;
        if (visitor) visitor(perm);
        if (node.size() < max_len) self(self);
      }
      if (x == 0) break;
      node.shift_sibling();
    }
    node.pop();
  };
  walk(walk);
  stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return stats;
}

/// Per-prepend classification behind left_crucial_lower_bound.
struct BoundOutcome {
  enum class PrependClass { HasSquare, PartialSquare, NoPartial };
  struct PerValue {
    int value = 0;
    PrependClass cls = PrependClass::HasSquare;
    int k = 0;          // witness for PartialSquare
    int candidate = 0;  // contributed length bound, 0 if none
  };
  std::vector<PerValue> per_value;
  int lower_bound = 0;
};

/// Smallest multiple of 4 with (n+1)/2 < k < n such that the first k entries
/// of the length-(n+1) input are order-isomorphic, after truncation, to the
/// entries from position k on; absent if none.
inline std::optional<int> partial_square_k(const Permutation& extended) {
  return detail::partial_square_k_span(extended.view());
}

/// Full per-prepend breakdown of the left-crucial length bound.
inline BoundOutcome left_crucial_bound_outcome(const Permutation& p) {
  const int n = p.size();
  if (n < 3) throw InvalidInput("bound requires length at least 3");
  if (!is_square_free(p)) throw InvalidInput("bound requires a square-free permutation");
  BoundOutcome out;
  std::vector<int> ext;
  int t = 0;
  for (int x = 0; x <= n; ++x) {
    BoundOutcome::PerValue pv;
    pv.value = x;
    detail::fill_left_extension(p.view(), x, ext);
    if (detail::square_at_front(ext)) {
      pv.cls = BoundOutcome::PrependClass::HasSquare;
    } else if (auto k = detail::partial_square_k_span(ext)) {
      pv.cls = BoundOutcome::PrependClass::PartialSquare;
      pv.k = *k;
      pv.candidate = 2 * *k - 1;
    } else {
      pv.cls = BoundOutcome::PrependClass::NoPartial;
      if (n % 4 == 0) {
        pv.candidate = 2 * n - 1;
      } else {
        ++t;
      }
    }
    out.lower_bound = std::max(out.lower_bound, pv.candidate);
    out.per_value.push_back(pv);
  }
  if (t >= 1) {
    const int m = ((n + 4) / 4) * 4;
    out.lower_bound = std::max(out.lower_bound, 2 * m + 8 * (t - 1) - 1);
  }
  return out;
}

/// Lower bound on the length of any left-crucial permutation beginning with
/// the pattern p; 0 when every prepend already creates a square.
inline int left_crucial_lower_bound(const Permutation& p) {
  return left_crucial_bound_outcome(p).lower_bound;
}

/// Streams every left-crucial permutation of the given length that matches
/// the phase filter. Uses square pruning plus lower-bound pruning (cutoff
/// length+1 by default). The yield callback must be thread-safe when tuning
/// requests more than one thread.
inline SearchStats enumerate_left_crucial(int length, StartPhase phase,
                                          const std::function<void(const Permutation&)>& yield,
                                          const SearchTuning& tuning = {}, int bound_cutoff = 0) {
  if (length < 4) throw InvalidInput("left-crucial enumeration needs length >= 4");
  detail::EngineOptions opt;
  opt.max_len = length;
  opt.phase = phase;
  opt.bound_cutoff = bound_cutoff ? bound_cutoff : length + 1;
  opt.node_budget = tuning.node_budget;
  opt.split_depth = tuning.split_depth;
  opt.threads = resolve_threads(tuning);
  auto leaf = [&](std::span<const int> p) {
    if (detail::left_crucial_given_square_free(p)) {
      yield(Permutation::unchecked(std::vector<int>(p.begin(), p.end())));
    }
  };
  return detail::run_engine(opt, leaf);
}

/// Result of the suffix-deduplication pipeline.
struct SuffixDedupeResult {
  uint64_t unique_suffix_count = 0;
  uint64_t right_crucial_extension_count = 0;
  SearchStats stats;
};

/// Enumerates left-crucial permutations of source_len (phase filtered), takes
/// the pattern of each suffix after dropping the first `drop` entries,
/// deduplicates, then counts the right-crucial permutations of length
/// target_len - drop extending each unique suffix.
inline SuffixDedupeResult suffix_dedupe_extend(int source_len, int drop, int target_len,
                                               StartPhase phase, const SearchTuning& tuning = {}) {
  if (drop < 0 || drop >= source_len) throw InvalidInput("drop must satisfy 0 <= drop < source_len");
  SuffixDedupeResult res;
  std::unordered_set<std::string> suffixes;  // one byte per entry
  std::mutex mu;
  res.stats = enumerate_left_crucial(source_len, phase, [&](const Permutation& p) {
    auto suffix = pattern_of(p.view().subspan(static_cast<size_t>(drop)));
    std::string key(suffix.entries().begin(), suffix.entries().end());
    std::scoped_lock lk(mu);
    suffixes.insert(std::move(key));
  }, tuning);
  res.unique_suffix_count = suffixes.size();

  const int ext_len = target_len - drop;
  std::atomic<uint64_t> found{0};
  for (const auto& key : suffixes) {
    std::vector<int> seed(key.begin(), key.end());
    if (static_cast<int>(seed.size()) > ext_len) continue;
    if (static_cast<int>(seed.size()) == ext_len) {
      if (detail::right_crucial_given_square_free(seed)) ++found;
      continue;
    }
    detail::EngineOptions opt;
    opt.max_len = ext_len;
    opt.threads = 1;
    auto leaf = [&](std::span<const int> p) {
      if (detail::right_crucial_given_square_free(p)) found.fetch_add(1, std::memory_order_relaxed);
    };
    auto st = detail::run_engine(opt, leaf, nullptr, seed);
    res.stats.merge(st);
  }
  res.right_crucial_extension_count = found.load();
  return res;
}

/// Outcome of an exhaustive bicrucial search at one length.
struct NonexistenceResult {
  enum class Outcome { Verified, FoundWitness, BudgetExhausted };
  Outcome outcome = Outcome::Verified;
  std::vector<Permutation> witnesses;  // one representative per symmetry orbit
  SearchStats stats;

  bool verified() const { return outcome == Outcome::Verified; }
};

/// Exhaustive search for bicrucial permutations of length n, reduced by
/// symmetry: even lengths restrict to up-up starts (every orbit under
/// reverse/complement has exactly one such member), odd lengths use
/// central-window canonicalization. Verified means the search completed and
/// found no witness; the witnesses of the reduced search, closed under
/// reverse and complement, are exactly all bicrucial permutations of length n.
inline NonexistenceResult search_bicrucial_nonexistence(int n, const SearchTuning& tuning = {}) {
  if (n < 4) throw InvalidInput("nonexistence search needs length >= 4");
  NonexistenceResult res;
  detail::EngineOptions opt;
  opt.max_len = n;
  opt.bound_cutoff = n + 1;
  opt.node_budget = tuning.node_budget;
  opt.split_depth = tuning.split_depth;
  opt.threads = resolve_threads(tuning);
  if (n % 2 == 0) {
    opt.phase = StartPhase::UpUp;
  } else {
    opt.sym_n = n;
  }
  std::mutex mu;
  auto leaf = [&](std::span<const int> p) {
    if (detail::bicrucial_given_square_free(p)) {
      auto perm = Permutation::unchecked(std::vector<int>(p.begin(), p.end()));
      std::scoped_lock lk(mu);
      res.witnesses.push_back(std::move(perm));
    }
  };
  bool exhausted = false;
  res.stats = detail::run_engine(opt, leaf, &exhausted);
  std::sort(res.witnesses.begin(), res.witnesses.end());
  if (exhausted) {
    res.outcome = NonexistenceResult::Outcome::BudgetExhausted;
  } else if (!res.witnesses.empty()) {
    res.outcome = NonexistenceResult::Outcome::FoundWitness;
  } else {
    res.outcome = NonexistenceResult::Outcome::Verified;
  }
  return res;
}

}  // namespace sqperm
