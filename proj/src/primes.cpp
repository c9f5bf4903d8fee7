#include "smoothrmf/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothrmf/errors.hpp"

namespace smoothrmf {
namespace {

constexpr std::uint64_t kSegmentBytes = 1u << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Linear sieve: every composite is crossed out exactly once by its spf.
void linear_sieve(std::uint64_t limit, std::vector<std::uint64_t>& primes,
                  std::vector<std::uint32_t>& spf) {
  spf.assign(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(i);
    }
    const std::uint64_t si = spf[i];
    for (const std::uint64_t p : primes) {
      if (p > si || p * i > limit) break;
      spf[p * i] = static_cast<std::uint32_t>(p);
    }
  }
}

void segmented_sieve(std::uint64_t limit, std::vector<std::uint64_t>& primes) {
  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint64_t> base;
  {
    std::vector<char> small(root + 1, 1);
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (!small[i]) continue;
      base.push_back(i);
      for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }
  }
  primes.push_back(2);
  const auto estimate = static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1);
  primes.reserve(static_cast<std::size_t>(estimate * 1.05) + 16);

  // Odd numbers only: slot i of a segment starting at odd `low` represents low + 2i.
  std::vector<char> segment(kSegmentBytes);
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) next[k] = base[k] * base[k];

  for (std::uint64_t low = 3; low <= limit; low += 2 * kSegmentBytes) {
    const std::uint64_t high = std::min(limit, low + 2 * kSegmentBytes - 1);
    const std::uint64_t slots = (high - low) / 2 + 1;
    std::fill_n(segment.begin(), slots, 1);
    for (std::size_t k = 1; k < base.size(); ++k) {  // skip p = 2
      const std::uint64_t p = base[k];
      std::uint64_t m = next[k];
      for (; m <= high; m += 2 * p) segment[(m - low) / 2] = 0;
      next[k] = m;
    }
    for (std::uint64_t i = 0; i < slots; ++i)
      if (segment[i]) primes.push_back(low + 2 * i);
  }
}

}  // namespace

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, a] : entries) {
    for (std::uint32_t k = 0; k < a; ++k) {
      if (__builtin_mul_overflow(v, p, &v))
        throw RangeError("factorization value overflows 64 bits");
    }
  }
  return v;
}

std::uint64_t PrimeTable::spf(std::uint64_t n) const {
  if (n < 2 || n > spf_limit_)
    throw RangeError("spf lookup out of range: n=" + std::to_string(n) +
                     " spf_limit=" + std::to_string(spf_limit_));
  return spf_[n];
}

std::size_t PrimeTable::count_up_to(std::uint64_t v) const {
  if (v > limit_)
    throw RangeError("prime count query " + std::to_string(v) + " beyond table limit " +
                     std::to_string(limit_));
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), v) -
                                  primes_.begin());
}

std::optional<std::size_t> PrimeTable::index_of(std::uint64_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - primes_.begin());
}

PrimeTable sieve(std::uint64_t limit, bool want_spf, const SieveCaps& caps) {
  if (limit < 2) throw DomainError("sieve limit must be >= 2, got " + std::to_string(limit));
  if (limit > caps.prime_cap)
    throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds prime cap " +
                        std::to_string(caps.prime_cap));
  if (want_spf && limit > caps.spf_cap)
    throw ResourceError("spf table limit " + std::to_string(limit) + " exceeds spf cap " +
                        std::to_string(caps.spf_cap));
  if (limit >= (std::uint64_t{1} << 32))
    throw ResourceError("sieve limit must stay below 2^32");

  PrimeTable t;
  t.limit_ = limit;
  if (want_spf) {
    linear_sieve(limit, t.primes_, t.spf_);
    t.spf_limit_ = limit;
  } else {
    segmented_sieve(limit, t.primes_);
  }
  t.primes_.shrink_to_fit();
  return t;
}

Factorization factorize(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization f;
  if (n == 1) return f;

  auto push = [&f](std::uint64_t p) {
    if (!f.entries.empty() && f.entries.back().prime == p)
      ++f.entries.back().exponent;
    else
      f.entries.push_back({p, 1});
  };

  if (n <= table.spf_limit()) {
    while (n > 1) {
      const std::uint64_t p = table.spf(n);
      push(p);
      n /= p;
    }
    return f;
  }

  std::uint64_t square = 0;
  const bool square_overflows = __builtin_mul_overflow(table.limit(), table.limit(), &square);
  if (!square_overflows && n > square)
    throw RangeError("factorize: n=" + std::to_string(n) + " exceeds limit^2 of the prime table");

  for (const std::uint64_t p : table.primes()) {
    if (p > n / p) break;
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  }
  if (n > 1) push(n);
  return f;
}

std::optional<std::uint64_t> largest_prime_factor(std::uint64_t n, const PrimeTable& table) {
  const Factorization f = factorize(n, table);
  if (f.empty()) return std::nullopt;
  return f.entries.back().prime;
}

bool is_smooth(std::uint64_t n, std::uint64_t y, const PrimeTable& table) {
  const auto p = largest_prime_factor(n, table);
  return !p || *p <= y;
}

}  // namespace smoothrmf
