#pragma once

// Prime enumeration, smallest-prime-factor tables and exact factorization.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace smoothrmf {

struct SieveCaps {
  std::uint64_t spf_cap = 10'000'000;       // largest limit for which an spf table is built
  std::uint64_t prime_cap = 1'000'000'000;  // largest limit for plain prime enumeration
};

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with strictly ascending primes; empty for n = 1.
struct Factorization {
  std::vector<PrimePower> entries;

  /// Reconstructs the integer. Throws RangeError if the product overflows 64 bits.
  std::uint64_t value() const;
  bool empty() const { return entries.empty(); }
};

/// Immutable table of primes up to `limit`, optionally with smallest prime
/// factors for 2 <= n <= spf_limit. Safe to share across threads.
class PrimeTable {
 public:
  PrimeTable() = default;

  std::uint64_t limit() const { return limit_; }
  std::uint64_t spf_limit() const { return spf_limit_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }

  /// Smallest prime factor of n; requires 2 <= n <= spf_limit().
  std::uint64_t spf(std::uint64_t n) const;

  /// Number of primes <= v, for v <= limit().
  std::size_t count_up_to(std::uint64_t v) const;

  /// Index of p in primes(), or nullopt if p is not a tabulated prime.
  std::optional<std::size_t> index_of(std::uint64_t p) const;

  bool is_prime(std::uint64_t n) const { return index_of(n).has_value(); }

  friend PrimeTable sieve(std::uint64_t limit, bool want_spf, const SieveCaps& caps);

 private:
  std::uint64_t limit_ = 0;
  std::uint64_t spf_limit_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<std::uint32_t> spf_;
};

/// Builds the table of primes <= limit (segmented, odd-only). With want_spf the
/// smallest-prime-factor array covers the whole range. Throws ResourceError
/// when limit exceeds the relevant cap, DomainError when limit < 2.
PrimeTable sieve(std::uint64_t limit, bool want_spf = false, const SieveCaps& caps = {});

/// Exact factorization of n. Uses the spf table when n <= spf_limit, otherwise
/// trial division by tabulated primes while n <= limit^2. RangeError beyond that.
Factorization factorize(std::uint64_t n, const PrimeTable& table);

/// Largest prime factor P(n); nullopt for n = 1.
std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const PrimeTable& table);

/// y-smoothness test with the convention that 1 is y-smooth for every y.
bool is_smooth(std::uint64_t n, std::uint64_t y, const PrimeTable& table);

}  // namespace smoothrmf
