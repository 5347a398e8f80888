#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqperm/crucial.hpp"
#include "sqperm/permutation.hpp"
#include "sqperm/search.hpp"
#include "sqperm/squares.hpp"

namespace sqperm {

enum class CountKind { SquareFree, LeftCrucial, Bicrucial };

enum class CountMethod { SymmetryReduced, BruteForce };

inline const char* to_string(CountKind k) {
  switch (k) {
    case CountKind::SquareFree: return "square-free";
    case CountKind::LeftCrucial: return "left-crucial";
    case CountKind::Bicrucial: return "bicrucial";
  }
  return "?";
}

/// One exact enumeration result.
///
/// For SymmetryReduced square-free and bicrucial counts,
///   count = 4 * reduced_count - 2 * correction,
/// where reduced_count is the number of orbit representatives kept by the
/// reduced search and correction is how many of those have reverse equal to
/// complement (each such representative stands for an orbit of size 2, not 4).
/// For left-crucial counts, count = 2 * reduced_count and correction = 0.
struct CountReport {
  CountKind kind = CountKind::SquareFree;
  int length = 0;
  uint64_t count = 0;
  CountMethod method = CountMethod::BruteForce;
  uint64_t reduced_count = 0;  // C
  uint64_t correction = 0;     // D
  SearchStats stats;
  double wall_seconds = 0.0;
};

namespace detail {

inline bool leaf_matches(CountKind kind, std::span<const int> p) {
  switch (kind) {
    case CountKind::SquareFree: return true;  // search tree is already square-pruned
    case CountKind::LeftCrucial: return left_crucial_given_square_free(p);
    case CountKind::Bicrucial: return bicrucial_given_square_free(p);
  }
  return false;
}

inline void checked_add(uint64_t& acc, uint64_t inc) {
  const uint64_t next = acc + inc;
  if (next < acc) throw VerificationFailed("counter overflow");
  acc = next;
}

}  // namespace detail

/// Oracle counter: plain DFS over all permutations with square pruning only,
/// applying the kind predicate to every full-length node. Capped because the
/// unreduced tree grows fast.
inline CountReport count_brute(CountKind kind, int n, int cap = 11) {
  if (n > cap) throw CapExceeded("brute-force counting capped at length " + std::to_string(cap));
  if (n < 1) throw InvalidInput("length must be at least 1");
  CountReport rep;
  rep.kind = kind;
  rep.length = n;
  rep.method = CountMethod::BruteForce;
  const auto t0 = std::chrono::steady_clock::now();
  detail::EngineOptions opt;
  opt.max_len = n;
  std::atomic<uint64_t> hits{0};
  auto leaf = [&](std::span<const int> p) {
    if (detail::leaf_matches(kind, p)) hits.fetch_add(1, std::memory_order_relaxed);
  };
  rep.stats = detail::run_engine(opt, leaf);
  rep.count = hits.load();
  rep.reduced_count = rep.count;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace detail {

// Shared reduced-count driver for the classes closed under reverse and
// complement (square-free, bicrucial). Even n: count up-up starts, every
// orbit having exactly one. Odd n: central-window canonicalization. Both
// report C (kept representatives) and D (kept representatives with reverse
// equal to complement) with total 4C - 2D.
inline CountReport count_symmetric_class(CountKind kind, int n, const SearchTuning& tuning,
                                         bool bound_prune) {
  CountReport rep;
  rep.kind = kind;
  rep.length = n;
  const auto t0 = std::chrono::steady_clock::now();
  if (n <= 3) {
    rep = count_brute(kind, n);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  rep.method = CountMethod::SymmetryReduced;
  EngineOptions opt;
  opt.max_len = n;
  opt.threads = resolve_threads(tuning);
  opt.split_depth = tuning.split_depth;
  opt.node_budget = tuning.node_budget;
  if (bound_prune) opt.bound_cutoff = n + 1;
  if (n % 2 == 0) {
    opt.phase = StartPhase::UpUp;
  } else {
    opt.sym_n = n;
  }
  std::atomic<uint64_t> kept{0}, self_paired{0};
  auto leaf = [&](std::span<const int> p) {
    if (!leaf_matches(kind, p)) return;
    kept.fetch_add(1, std::memory_order_relaxed);
    if (reverse_equals_complement(p)) self_paired.fetch_add(1, std::memory_order_relaxed);
  };
  rep.stats = run_engine(opt, leaf);
  rep.reduced_count = kept.load();
  rep.correction = self_paired.load();
  uint64_t total = 0;
  checked_add(total, 4 * rep.reduced_count);
  total -= 2 * rep.correction;
  rep.count = total;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace detail

/// Exact number of square-free permutations of length n.
inline CountReport count_square_free(int n, const SearchTuning& tuning = {}) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  return detail::count_symmetric_class(CountKind::SquareFree, n, tuning, /*bound_prune=*/false);
}

/// Exact number of bicrucial permutations of length n.
inline CountReport count_bicrucial(int n, const SearchTuning& tuning = {}) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  return detail::count_symmetric_class(CountKind::Bicrucial, n, tuning, /*bound_prune=*/true);
}

/// Exact number of left-crucial permutations of length n: twice the number
/// that begin with an up-step (complement pairs each with a down-start one).
inline CountReport count_left_crucial(int n, const SearchTuning& tuning = {}) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  CountReport rep;
  rep.kind = CountKind::LeftCrucial;
  rep.length = n;
  const auto t0 = std::chrono::steady_clock::now();
  if (n <= 3) {
    rep = count_brute(CountKind::LeftCrucial, n);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  rep.method = CountMethod::SymmetryReduced;
  detail::EngineOptions opt;
  opt.max_len = n;
  opt.phase = StartPhase::Up;
  opt.bound_cutoff = n + 1;
  opt.threads = resolve_threads(tuning);
  opt.split_depth = tuning.split_depth;
  opt.node_budget = tuning.node_budget;
  std::atomic<uint64_t> kept{0};
  auto leaf = [&](std::span<const int> p) {
    if (detail::left_crucial_given_square_free(p)) kept.fetch_add(1, std::memory_order_relaxed);
  };
  rep.stats = detail::run_engine(opt, leaf);
  rep.reduced_count = kept.load();
  rep.correction = 0;
  rep.count = 2 * rep.reduced_count;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline CountReport count_of_kind(CountKind kind, int n, const SearchTuning& tuning = {}) {
  switch (kind) {
    case CountKind::SquareFree: return count_square_free(n, tuning);
    case CountKind::LeftCrucial: return count_left_crucial(n, tuning);
    case CountKind::Bicrucial: return count_bicrucial(n, tuning);
  }
  throw InvalidInput("unknown count kind");
}

/// Number of length-n permutations of the kind whose reverse equals their
/// complement (p_{n-1-i} = n-1-p_i). Enumerated by DFS over the first
/// ceil(n/2) entries; the constraint determines the rest.
inline uint64_t count_rev_eq_comp(CountKind kind, int n) {
  if (n < 1) throw InvalidInput("length must be at least 1");
  const int half = (n + 1) / 2;
  std::vector<int> perm(static_cast<size_t>(n), -1);
  std::vector<char> used(static_cast<size_t>(n), 0);
  uint64_t count = 0;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == half) {
      auto sp = std::span<const int>(perm);
      if (detail::square_free(sp) && detail::leaf_matches(kind, sp)) ++count;
      return;
    }
    const int mirror = n - 1 - i;
    for (int v = 0; v < n; ++v) {
      if (used[static_cast<size_t>(v)]) continue;
      const int w = n - 1 - v;
      if (i == mirror) {
        if (v != w) continue;  // the middle position must carry the middle value
      } else if (used[static_cast<size_t>(w)] || v == w) {
        continue;
      }
      perm[static_cast<size_t>(i)] = v;
      perm[static_cast<size_t>(mirror)] = w;
      used[static_cast<size_t>(v)] = 1;
      used[static_cast<size_t>(w)] = 1;
      // the filled prefix is contiguous; prune on squares ending at position i
      if (!detail::square_at_back(std::span<const int>(perm.data(), static_cast<size_t>(i + 1)))) {
        self(self, i + 1);
      }
      used[static_cast<size_t>(v)] = 0;
      used[static_cast<size_t>(w)] = 0;
      perm[static_cast<size_t>(i)] = -1;
      perm[static_cast<size_t>(mirror)] = -1;
    }
  };
  rec(rec, 0);
  return count;
}

/// Reference counts of square-free, left-crucial and bicrucial permutations.
struct KnownCountsRow {
  int n;
  uint64_t square_free;
  uint64_t left_crucial;
  uint64_t bicrucial;
};

inline constexpr std::array<KnownCountsRow, 23> kKnownCounts{{
    {1, 1ULL, 0ULL, 0ULL},
    {2, 2ULL, 0ULL, 0ULL},
    {3, 6ULL, 0ULL, 0ULL},
    {4, 12ULL, 0ULL, 0ULL},
    {5, 34ULL, 0ULL, 0ULL},
    {6, 104ULL, 0ULL, 0ULL},
    {7, 406ULL, 60ULL, 0ULL},
    {8, 1112ULL, 140ULL, 0ULL},
    {9, 3980ULL, 518ULL, 54ULL},
    {10, 15216ULL, 1444ULL, 0ULL},
    {11, 68034ULL, 8556ULL, 0ULL},
    {12, 312048ULL, 31992ULL, 0ULL},
    {13, 1625968ULL, 220456ULL, 69856ULL},
    {14, 8771376ULL, 984208ULL, 0ULL},
    {15, 53270068ULL, 7453080ULL, 2930016ULL},
    {16, 319218912ULL, 39692800ULL, 0ULL},
    {17, 2135312542ULL, 289981136ULL, 40654860ULL},
    {18, 14420106264ULL, 1467791790ULL, 0ULL},
    {19, 109051882344ULL, 14316379108ULL, 162190472ULL},
    {20, 815868128288ULL, 86001855074ULL, 0ULL},
    {21, 6772099860398ULL, 949804475890ULL, 312348610684ULL},
    {22, 56501841264216ULL, 6494842788046ULL, 0ULL},
    {23, 519359404861294ULL, 73636377696714ULL, 29202730580288ULL},
}};

inline std::optional<uint64_t> known_count(CountKind kind, int n) {
  for (const auto& row : kKnownCounts) {
    if (row.n == n) {
      switch (kind) {
        case CountKind::SquareFree: return row.square_free;
        case CountKind::LeftCrucial: return row.left_crucial;
        case CountKind::Bicrucial: return row.bicrucial;
      }
    }
  }
  return std::nullopt;
}

}  // namespace sqperm
