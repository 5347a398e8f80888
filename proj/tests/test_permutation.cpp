#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "sqperm/permutation.hpp"
#include "test_util.hpp"

using sqperm::Permutation;
using testutil::perm;

TEST_CASE("pattern_of replaces the ith smallest entry by i") {
  CHECK(sqperm::pattern_of({5, 2, 4, 10}) == perm({2, 0, 1, 3}));
  CHECK(sqperm::pattern_of({0, 1, 2}) == perm({0, 1, 2}));
  CHECK(sqperm::pattern_of(std::vector<int>{}) == Permutation{});
  CHECK_THROWS_AS(sqperm::pattern_of({1, 1}), sqperm::InvalidInput);
}

TEST_CASE("pattern_of is idempotent") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng() % 10);
    std::set<int> vals;
    while (static_cast<int>(vals.size()) < n) vals.insert(static_cast<int>(rng() % 1000));
    std::vector<int> v(vals.begin(), vals.end());
    std::shuffle(v.begin(), v.end(), rng);
    const Permutation once = sqperm::pattern_of(v);
    CHECK(sqperm::pattern_of(once.entries()) == once);
  }
}

TEST_CASE("order_isomorphic compares position pairs") {
  CHECK(sqperm::order_isomorphic(std::vector<int>{1, 0, 5}, std::vector<int>{3, 2, 4}));
  CHECK_FALSE(sqperm::order_isomorphic(std::vector<int>{5, 0, 4}, std::vector<int>{2, 1, 3}));
  CHECK(sqperm::order_isomorphic(std::vector<int>{0, 1}, std::vector<int>{0, 1}));
  CHECK_FALSE(sqperm::order_isomorphic(std::vector<int>{0, 1}, std::vector<int>{0, 1, 2}));
}

TEST_CASE("order_isomorphic_truncated compares against the longer prefix") {
  CHECK(sqperm::order_isomorphic_truncated(std::vector<int>{1, 0, 5, 6}, std::vector<int>{3, 2, 4}));
  CHECK_FALSE(
      sqperm::order_isomorphic_truncated(std::vector<int>{5, 0, 4, 6}, std::vector<int>{2, 1, 3}));
  CHECK(sqperm::order_isomorphic_truncated(std::vector<int>{0, 1, 2}, std::vector<int>{}));
}

TEST_CASE("reverse and complement") {
  CHECK(sqperm::reverse(perm({0, 1, 2})) == perm({2, 1, 0}));
  CHECK(sqperm::reverse(perm({1, 0})) == perm({0, 1}));
  CHECK(sqperm::reverse(sqperm::reverse(perm({2, 0, 1, 3}))) == perm({2, 0, 1, 3}));
  CHECK(sqperm::complement(perm({0, 1, 2})) == perm({2, 1, 0}));
  CHECK(sqperm::complement(perm({2, 0, 1, 3})) == perm({1, 3, 2, 0}));
  CHECK(sqperm::complement(sqperm::complement(perm({3, 1, 0, 2}))) == perm({3, 1, 0, 2}));
}

TEST_CASE("reverse and complement are commuting involutions") {
  for (int n = 2; n <= 6; ++n) {
    testutil::for_each_permutation(n, [&](const std::vector<int>& v) {
      const Permutation p(v);
      CHECK(sqperm::reverse(sqperm::reverse(p)) == p);
      CHECK(sqperm::complement(sqperm::complement(p)) == p);
      CHECK(sqperm::reverse(sqperm::complement(p)) == sqperm::complement(sqperm::reverse(p)));
    });
  }
}

TEST_CASE("reverse_equals_complement detects central antisymmetry") {
  CHECK(sqperm::reverse_equals_complement(perm({0, 1}).view()));
  CHECK(sqperm::reverse_equals_complement(perm({1, 0}).view()));
  for (int n = 1; n <= 6; ++n) {
    testutil::for_each_permutation(n, [&](const std::vector<int>& v) {
      const Permutation p(v);
      CHECK(sqperm::reverse_equals_complement(p.view()) ==
            (sqperm::reverse(p) == sqperm::complement(p)));
    });
  }
}

TEST_CASE("text form round trips and rejects non-permutations") {
  const Permutation p = perm({0, 6, 5, 2, 4, 7, 3, 1, 8});
  CHECK(p.str() == "0,6,5,2,4,7,3,1,8");
  CHECK(Permutation::parse(p.str()) == p);
  CHECK(Permutation::parse("") == Permutation{});
  CHECK(Permutation::parse(" 1 , 0 ") == perm({1, 0}));
  CHECK_THROWS_AS(Permutation::parse("0,2"), sqperm::InvalidInput);
  CHECK_THROWS_AS(Permutation::parse("0,0"), sqperm::InvalidInput);
  CHECK_THROWS_AS(Permutation::parse("a,b"), sqperm::InvalidInput);
  CHECK_THROWS_AS(Permutation::parse("0,1,"), sqperm::InvalidInput);
  CHECK_THROWS_AS(Permutation(std::vector<int>{0, 2}), sqperm::InvalidInput);
}

TEST_CASE("right extensions are exactly the prefix-compatible extensions") {
  // Oracle: filter all length-3 permutations on their length-2 prefix pattern.
  std::set<Permutation> expected;
  testutil::for_each_permutation(3, [&](const std::vector<int>& v) {
    if ((v[0] < v[1])) expected.insert(Permutation(v));  // prefix pattern (0,1)
  });
  const auto got = sqperm::right_extensions(perm({0, 1}));
  CHECK(std::set<Permutation>(got.begin(), got.end()) == expected);
  CHECK(expected == std::set<Permutation>{perm({0, 1, 2}), perm({0, 2, 1}), perm({1, 2, 0})});
}

TEST_CASE("left extensions of the empty permutation") {
  const auto got = sqperm::left_extensions(Permutation{});
  REQUIRE(got.size() == 1);
  CHECK(got[0] == perm({0}));
}

TEST_CASE("extension counts are n+1") {
  std::mt19937 rng(3);
  std::vector<int> v(10);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  const Permutation p(v);
  CHECK(sqperm::right_extensions(p).size() == 11);
  CHECK(sqperm::left_extensions(p).size() == 11);
  for (const auto& e : sqperm::right_extensions(p)) {
    CHECK(sqperm::pattern_of(std::span<const int>(e.entries()).first(10)) == p);
  }
  for (const auto& e : sqperm::left_extensions(p)) {
    CHECK(sqperm::pattern_of(std::span<const int>(e.entries()).subspan(1)) == p);
  }
}
