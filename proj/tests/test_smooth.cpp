#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/saddle.hpp"
#include "smoothrmf/smooth.hpp"

using namespace smoothrmf;

namespace {
const PrimeTable& table() {
  static const PrimeTable t = sieve(1'000'000, true);
  return t;
}

SmoothQuery window_query(std::uint64_t lower, std::uint64_t x, std::uint64_t lo, std::uint64_t hi) {
  return SmoothQuery{.x = x, .y = std::max<std::uint64_t>(hi, 2), .lower = lower, .prime_window = PrimeWindow{lo, hi}};
}
}  // namespace

TEST_CASE("psi examples") {
  for (auto s : {CountStrategy::Auto, CountStrategy::Scan, CountStrategy::Recursive}) {
    CHECK(psi_exact(10, 10, table(), s) == 10);
    CHECK(psi_exact(100, 3, table(), s) == 20);
    CHECK(psi_exact(10, 2, table(), s) == 4);
    CHECK(psi_exact(1, 2, table(), s) == 1);
  }
  CHECK(psi_exact(100, 3, table()) == oracle::brute_psi(100, 3));
}

TEST_CASE("psi(x, y >= x) = x") {
  for (std::uint64_t x : {2ull, 3ull, 17ull, 1000ull, 65'537ull, 1'000'000ull}) {
    CHECK(psi_exact(x, x, table()) == x);
    CHECK(psi_exact(x, x + 5, table(), CountStrategy::Recursive) == x);
  }
}

TEST_CASE("scan and recursive strategies agree on random pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> px(1, 100'000);
  for (int i = 0; i < 200; ++i) {
    const auto x = px(rng);
    std::uniform_int_distribution<std::uint64_t> py(2, std::max<std::uint64_t>(2, x));
    const auto y = py(rng);
    const auto a = psi_exact(x, y, table(), CountStrategy::Scan);
    const auto b = psi_exact(x, y, table(), CountStrategy::Recursive);
    REQUIRE_MESSAGE(a == b, "x=" << x << " y=" << y);
  }
}

TEST_CASE("psi matches brute force on small grid") {
  for (std::uint64_t x = 1; x <= 300; x += 7)
    for (std::uint64_t y = 2; y <= 40; y += 3) REQUIRE(psi_exact(x, y, table()) == oracle::brute_psi(x, y));
}

TEST_CASE("monotonicity in x and y") {
  for (std::uint64_t x = 1000; x <= 20'000; x += 1000) {
    std::uint64_t prev = 0;
    for (std::uint64_t y = 2; y <= 200; y += 9) {
      const auto v = psi_exact(x, y, table());
      CHECK(v >= prev);
      CHECK(v <= psi_exact(x + 1000, y, table()));
      prev = v;
    }
  }
}

TEST_CASE("interval additivity") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pick(0, 50'000);
  for (int i = 0; i < 50; ++i) {
    std::uint64_t v[3] = {pick(rng), pick(rng), pick(rng)};
    std::sort(v, v + 3);
    if (v[0] == v[1] || v[1] == v[2]) continue;
    for (std::uint64_t y : {3ull, 30ull, 1000ull}) {
      auto q = [&](std::uint64_t lo, std::uint64_t hi) {
        return psi_exact(SmoothQuery{.x = hi, .y = y, .lower = lo, .prime_window = std::nullopt}, table());
      };
      CHECK(q(v[0], v[2]) == q(v[0], v[1]) + q(v[1], v[2]));
    }
  }
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(psi_exact(0, 5, table()), DomainError);
  CHECK_THROWS_AS(psi_exact(10, 1, table()), DomainError);
  CHECK_THROWS_AS(psi_exact(SmoothQuery{.x = 10, .y = 3, .lower = 10, .prime_window = std::nullopt}, table()),
                  DomainError);
  CHECK_THROWS_AS(psi_exact(window_query(0, 10, 5, 5), table()), DomainError);
  CHECK_THROWS_AS(psi_exact(window_query(0, 10, 0, 5), table()), DomainError);
}

TEST_CASE("strategy limits raise resource errors") {
  const auto small = sieve(10'000, true);
  CHECK_THROWS_AS(psi_exact(20'000, 20'000, small, CountStrategy::Scan), ResourceError);
  CHECK_THROWS_AS(psi_exact(20'000, 20'000, small, CountStrategy::Recursive), RangeError);
  CHECK(psi_exact(20'000, 100, small) == psi_exact(20'000, 100, table()));
  CountLimits tight{.recursive_node_cap = 10, .enumeration_cap = 5, .scan_density_threshold = 0.5};
  CHECK_THROWS_AS(psi_exact(SmoothQuery{.x = 1000, .y = 50, .lower = 0, .prime_window = std::nullopt}, table(),
                            CountStrategy::Recursive, tight),
                  ResourceError);
  CHECK_THROWS_AS(enumerate_smooth(100, 3, table(), false, tight), ResourceError);
  try {
    psi_exact(20'000, 20'000, small, CountStrategy::Scan);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("recursive") != std::string::npos);
  }
}

TEST_CASE("auto strategy selection") {
  auto plain = [](std::uint64_t x, std::uint64_t y) {
    return SmoothQuery{.x = x, .y = y, .lower = 0, .prime_window = std::nullopt};
  };
  CHECK(choose_strategy(plain(1000, 1000), table()) == CountStrategy::Scan);
  CHECK(choose_strategy(plain(1'000'000, 10), table()) == CountStrategy::Recursive);
  CHECK(choose_strategy(plain(10'000'000, 10'000'000), table()) == CountStrategy::Recursive);
}

TEST_CASE("enumerate_smooth examples") {
  auto as_set = [](const std::vector<std::uint64_t>& v) { return std::set<std::uint64_t>(v.begin(), v.end()); };
  CHECK(as_set(enumerate_smooth(10, 2, table())) == std::set<std::uint64_t>{1, 2, 4, 8});
  CHECK(as_set(enumerate_smooth(5, 5, table())) == std::set<std::uint64_t>{1, 2, 3, 4, 5});
  const auto big = enumerate_smooth(1'000'000, 20, table(), true);
  CHECK(big.size() == psi_exact(1'000'000, 20, table()));
  CHECK(std::adjacent_find(big.begin(), big.end()) == big.end());
  CHECK(std::is_sorted(big.begin(), big.end()));
  for (std::size_t i = 0; i < big.size(); i += 101) CHECK(oracle::largest_prime_factor(big[i]) <= 20);
}

TEST_CASE("for_each_smooth passes the factorization") {
  std::uint64_t visited = 0;
  for_each_smooth(50'000, 30, table(), [&](std::uint64_t n, const Factorization& f) {
    ++visited;
    REQUIRE(f.value() == n);
    for (std::size_t k = 1; k < f.entries.size(); ++k) REQUIRE(f.entries[k - 1].prime < f.entries[k].prime);
  });
  CHECK(visited == psi_exact(50'000, 30, table()));
}

TEST_CASE("count_restricted_interval examples") {
  CHECK(count_restricted_interval(0, 30, 3, 10, table()) == 4);
  CHECK(count_restricted_interval(0, 10, 1, 10, table()) == 10);
  CHECK(count_restricted_interval(10, 10, 3, 10, table()) == 0);
  CHECK_THROWS_AS(count_restricted_interval(0, 0, 1, 10, table()), DomainError);
  CHECK_THROWS_AS(count_restricted_interval(0, 10, 5, 3, table()), DomainError);
}

TEST_CASE("count_restricted_interval agrees with brute force") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint64_t> px(0, 20'000), ph(1, 3000), plo(1, 60), pw(1, 300);
  for (int i = 0; i < 100; ++i) {
    const auto x = px(rng), h = ph(rng), lo = plo(rng), hi = lo + pw(rng);
    std::uint64_t expected = 0;
    for (std::uint64_t n = x + 1; n <= x + h; ++n) expected += oracle::all_factors_in(n, lo, hi) ? 1 : 0;
    for (auto s : {CountStrategy::Auto, CountStrategy::Scan, CountStrategy::Recursive})
      REQUIRE(count_restricted_interval(x, h, lo, hi, table(), s) == expected);
  }
}

TEST_CASE("psi_with_largest_prime_in examples") {
  CHECK(psi_with_largest_prime_in(20, 2, 3, table()) == 5);
  CHECK(psi_with_largest_prime_in(10, 1, 2, table()) == 3);
  for (std::uint64_t x = 1; x <= 100; ++x) REQUIRE(psi_with_largest_prime_in(x, 1, x + 1, table()) == x - 1);
  for (std::uint64_t x = 2; x <= 100; ++x) REQUIRE(psi_with_largest_prime_in(x, 1, x, table()) == x - 1);
  std::uint64_t brute = 0;
  for (std::uint64_t n = 2; n <= 5000; ++n) {
    const auto p = oracle::largest_prime_factor(n);
    brute += (p > 50 && p <= 120) ? 1 : 0;
  }
  CHECK(psi_with_largest_prime_in(5000, 50, 120, table()) == brute);
}

TEST_CASE("SmoothSet structure") {
  const auto set = SmoothSet::build(10'000, 50, table());
  const auto nodes = set.nodes();
  CHECK(nodes.size() == psi_exact(10'000, 50, table()));
  CHECK(set.member_count() == nodes.size());
  CHECK(nodes[0].value == 1);
  CHECK(nodes[0].prime_index == SmoothSet::kNoPrime);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    REQUIRE(nodes[i].parent < i);
    REQUIRE(nodes[i].value == nodes[nodes[i].parent].value * table().primes()[nodes[i].prime_index]);
  }
  CHECK(set.primes_used() == table().count_up_to(50));
}

TEST_CASE("SmoothSet constraints") {
  const auto largest = SmoothSet::build(20, 3, table(), LargestPrimeWindow{{2, 3}});
  CHECK(largest.member_count() == 5);
  CHECK_FALSE(largest.is_member(0));
  const auto empty_largest = SmoothSet::build(20, 3, table(), LargestPrimeWindow{{3, 4}});
  CHECK(empty_largest.member_count() == 0);
  const auto empty_all = SmoothSet::build(20, 3, table(), AllPrimesWindow{{3, 4}});
  CHECK(empty_all.member_count() == 1);
  CHECK(empty_all.is_member(0));
  const auto all = SmoothSet::build(30, 10, table(), AllPrimesWindow{{3, 10}});
  CHECK(all.member_count() == 4);  // 1, 5, 7, 25
}
