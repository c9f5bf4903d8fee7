#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/primes.hpp"

using namespace smoothrmf;

TEST_CASE("sieve small limits") {
  const auto t10 = sieve(10);
  CHECK(std::vector<std::uint64_t>(t10.primes().begin(), t10.primes().end()) ==
        std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve(2).size() == 1);
  CHECK(sieve(2).primes()[0] == 2);
  CHECK(sieve(3, true).size() == 2);
  CHECK_THROWS_AS(sieve(1), DomainError);
}

TEST_CASE("prime count to 10^6 matches trial division") {
  std::size_t expected = 0;
  for (std::uint64_t n = 2; n <= 1'000'000; ++n) expected += oracle::is_prime(n) ? 1 : 0;
  CHECK(expected == 78498);
  CHECK(sieve(1'000'000).size() == expected);
  CHECK(sieve(1'000'000, true).size() == expected);
}

TEST_CASE("segmented and spf sieves agree with trial division up to 10^5") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(2, 100'000);
  const auto reference = oracle::primes_up_to(100'000);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t limit = trial == 0 ? 100'000 : pick(rng);
    const auto plain = sieve(limit);
    const auto with_spf = sieve(limit, true);
    const auto n = static_cast<std::size_t>(std::upper_bound(reference.begin(), reference.end(), limit) - reference.begin());
    REQUIRE(plain.size() == n);
    REQUIRE(with_spf.size() == n);
    CHECK(std::equal(plain.primes().begin(), plain.primes().end(), reference.begin()));
    CHECK(std::equal(with_spf.primes().begin(), with_spf.primes().end(), reference.begin()));
  }
}

TEST_CASE("segment boundaries") {
  // Crosses several 2^18-slot segments of odd numbers.
  const std::uint64_t limit = 3 * (1u << 19) + 17;
  const auto t = sieve(limit);
  for (std::size_t i = 0; i < t.size(); i += 997) CHECK(oracle::is_prime(t.primes()[i]));
  std::uint64_t last = limit;
  while (!oracle::is_prime(last)) --last;
  CHECK(t.primes().back() == last);
}

TEST_CASE("spf invariants") {
  const auto t = sieve(200'000, true);
  for (std::uint64_t p : t.primes()) REQUIRE(t.spf(p) == p);
  for (std::uint64_t n = 2; n <= 200'000; ++n) {
    const auto s = t.spf(n);
    REQUIRE(n % s == 0);
    REQUIRE(t.is_prime(s));
    if (n % 2 == 0) REQUIRE(s == 2);
  }
  for (std::uint64_t n : {9991ull, 199'999ull, 65'536ull})
    for (std::uint64_t d = 2; d < t.spf(n); ++d) CHECK(n % d != 0);
}

TEST_CASE("caps are enforced") {
  SieveCaps caps{.spf_cap = 1000, .prime_cap = 5000};
  CHECK_THROWS_AS(sieve(2000, true, caps), ResourceError);
  CHECK_THROWS_AS(sieve(6000, false, caps), ResourceError);
  CHECK_NOTHROW(sieve(2000, false, caps));
  try {
    sieve(6000, false, caps);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("5000") != std::string::npos);
  }
}

TEST_CASE("factorize examples") {
  const auto t = sieve(1000, true);
  CHECK(factorize(12, t).entries == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(1, t).empty());
  CHECK(factorize(97, t).entries == std::vector<PrimePower>{{97, 1}});
  CHECK_THROWS_AS(factorize(0, t), DomainError);
  CHECK(largest_prime_factor(96, t) == 3u);
  CHECK_FALSE(largest_prime_factor(1, t).has_value());
  CHECK(largest_prime_factor(9991, t) == oracle::largest_prime_factor(9991));
  CHECK(largest_prime_factor(9991, t) == 103u);  // 97 * 103
}

TEST_CASE("trial-division fallback and range errors") {
  const auto t = sieve(1000);  // no spf table
  CHECK(t.spf_limit() == 0);
  CHECK(factorize(999'983, t).entries == std::vector<PrimePower>{{999'983, 1}});
  CHECK(factorize(1'000'000, t).entries == std::vector<PrimePower>{{2, 6}, {5, 6}});
  CHECK_THROWS_AS(factorize(1'000'001, t), RangeError);
  CHECK(is_smooth(1, 2, t));
  CHECK(is_smooth(96, 3, t));
  CHECK_FALSE(is_smooth(97, 96, t));
}

TEST_CASE("factorization reconstructs random inputs") {
  const auto t = sieve(1'000'000, true);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> in_spf(2, 1'000'000);
  std::uniform_int_distribution<std::uint64_t> beyond(1'000'001, 1'000'000'000'000ull);
  for (int i = 0; i < 2000; ++i) {
    const auto n = in_spf(rng);
    const auto f = factorize(n, t);
    REQUIRE(f.value() == n);
    for (std::size_t k = 1; k < f.entries.size(); ++k) REQUIRE(f.entries[k - 1].prime < f.entries[k].prime);
  }
  for (int i = 0; i < 200; ++i) {
    const auto n = beyond(rng);
    const auto f = factorize(n, t);
    REQUIRE(f.value() == n);
    for (const auto& pp : f.entries) REQUIRE(oracle::is_prime(pp.prime));
  }
}

TEST_CASE("factorization value overflow is reported") {
  Factorization f{{{2, 64}}};
  CHECK_THROWS_AS(f.value(), RangeError);
}
