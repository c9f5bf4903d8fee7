#include "smoothrmf/smooth.hpp"

#include <algorithm>
#include <string>

#include "smoothrmf/errors.hpp"
#include "smoothrmf/saddle.hpp"

namespace smoothrmf {
namespace {

// Admissible primes for a query, as a contiguous slice of the table.
std::span<const std::uint64_t> admissible_primes(std::uint64_t x, std::uint64_t lo, std::uint64_t hi,
                                                 const PrimeTable& table) {
  const std::uint64_t top = std::min(hi, x);
  if (top > table.limit())
    throw RangeError("prime table limit " + std::to_string(table.limit()) +
                     " does not cover primes up to " + std::to_string(top));
  const auto primes = table.primes();
  const auto first = std::upper_bound(primes.begin(), primes.end(), lo);
  const auto last = std::upper_bound(primes.begin(), primes.end(), top);
  if (first >= last) return {};
  return {first, last};
}

class RecursiveCounter {
 public:
  RecursiveCounter(std::span<const std::uint64_t> primes, std::uint64_t node_cap)
      : primes_(primes), cap_(node_cap) {}

  // #{n <= bound : all prime factors in primes_}, including n = 1.
  std::uint64_t count(std::uint64_t bound) {
    if (bound == 0) return 0;
    return count_from(bound, 0);
  }

 private:
  std::uint64_t count_from(std::uint64_t bound, std::size_t first) {
    if (++nodes_ > cap_)
      throw ResourceError("recursive counter exceeded node cap " + std::to_string(cap_) +
                          "; use the scan strategy");
    std::uint64_t total = 1;
    for (std::size_t j = first; j < primes_.size(); ++j) {
      const std::uint64_t p = primes_[j];
      if (p > bound) break;
      if (p > bound / p) {
        // p^2 > bound: every remaining admissible prime <= bound contributes only itself.
        const auto end = std::upper_bound(primes_.begin() + static_cast<std::ptrdiff_t>(j), primes_.end(), bound);
        total += static_cast<std::uint64_t>(end - (primes_.begin() + static_cast<std::ptrdiff_t>(j)));
        break;
      }
      total += count_from(bound / p, j);
    }
    return total;
  }

  std::span<const std::uint64_t> primes_;
  std::uint64_t cap_;
  std::uint64_t nodes_ = 0;
};

std::uint64_t scan_count(const SmoothQuery& q, std::uint64_t lo, std::uint64_t hi, const PrimeTable& table) {
  if (q.x > table.spf_limit())
    throw ResourceError("scan strategy needs an spf table up to " + std::to_string(q.x) +
                        " (have " + std::to_string(table.spf_limit()) + "); use the recursive strategy");
  std::uint64_t total = 0;
  for (std::uint64_t n = q.lower + 1; n <= q.x; ++n) {
    std::uint64_t m = n;
    bool ok = true;
    while (m > 1) {
      const std::uint64_t p = table.spf(m);
      if (p <= lo || p > hi) {
        ok = false;
        break;
      }
      do m /= p;
      while (m % p == 0);
    }
    total += ok ? 1 : 0;
  }
  return total;
}

SmoothQuery plain_query(std::uint64_t x, std::uint64_t y) {
  return SmoothQuery{.x = x, .y = y, .lower = 0, .prime_window = std::nullopt};
}

std::pair<std::uint64_t, std::uint64_t> query_bounds(const SmoothQuery& q) {
  if (q.prime_window) return {q.prime_window->lo, q.prime_window->hi};
  return {1, q.y};
}

}  // namespace

void SmoothQuery::validate() const {
  if (x == 0) throw DomainError("smooth query: x must be positive");
  if (lower >= x) throw DomainError("smooth query: lower must be < x");
  if (prime_window) {
    if (prime_window->lo < 1 || prime_window->lo >= prime_window->hi)
      throw DomainError("smooth query: prime window needs 1 <= lo < hi");
  } else if (y < 2) {
    throw DomainError("smooth query: y must be >= 2");
  }
}

CountStrategy choose_strategy(const SmoothQuery& query, const PrimeTable& table, const CountLimits& limits) {
  if (query.x > table.spf_limit()) return CountStrategy::Recursive;
  if (query.prime_window) return CountStrategy::Recursive;
  if (query.y >= query.x) return CountStrategy::Scan;
  const double density = ht_estimate(static_cast<double>(query.x), query.y, table).value /
                         static_cast<double>(query.x);
  return density >= limits.scan_density_threshold ? CountStrategy::Scan : CountStrategy::Recursive;
}

std::uint64_t psi_exact(const SmoothQuery& query, const PrimeTable& table, CountStrategy strategy,
                        const CountLimits& limits) {
  query.validate();
  if (strategy == CountStrategy::Auto) strategy = choose_strategy(query, table, limits);
  const auto [lo, hi] = query_bounds(query);
  if (strategy == CountStrategy::Scan) return scan_count(query, lo, hi, table);

  RecursiveCounter counter(admissible_primes(query.x, lo, hi, table), limits.recursive_node_cap);
  return counter.count(query.x) - counter.count(query.lower);
}

std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, const PrimeTable& table, CountStrategy strategy) {
  return psi_exact(plain_query(x, y), table, strategy);
}

void for_each_smooth(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                     const std::function<void(std::uint64_t, const Factorization&)>& visit,
                     const CountLimits& limits) {
  const std::uint64_t total = psi_exact(plain_query(x, y), table, CountStrategy::Recursive, limits);
  if (total > limits.enumeration_cap)
    throw ResourceError("Psi(x,y)=" + std::to_string(total) + " exceeds enumeration cap " +
                        std::to_string(limits.enumeration_cap));
  const auto primes = admissible_primes(x, 1, y, table);
  Factorization fact;

  auto dfs = [&](auto&& self, std::uint64_t n, std::size_t first) -> void {
    visit(n, fact);
    for (std::size_t j = first; j < primes.size(); ++j) {
      const std::uint64_t p = primes[j];
      if (p > x / n) break;
      if (!fact.entries.empty() && fact.entries.back().prime == p)
        ++fact.entries.back().exponent;
      else
        fact.entries.push_back({p, 1});
      self(self, n * p, j);
      if (--fact.entries.back().exponent == 0) fact.entries.pop_back();
    }
  };
  dfs(dfs, 1, 0);
}

std::vector<std::uint64_t> enumerate_smooth(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                                            bool sorted, const CountLimits& limits) {
  std::vector<std::uint64_t> out;
  for_each_smooth(x, y, table, [&out](std::uint64_t n, const Factorization&) { out.push_back(n); }, limits);
  if (sorted) std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_restricted_interval(std::uint64_t x, std::uint64_t h, std::uint64_t lo, std::uint64_t hi,
                                        const PrimeTable& table, CountStrategy strategy) {
  if (h < 1) throw DomainError("count_restricted_interval: h must be >= 1");
  std::uint64_t top = 0;
  if (__builtin_add_overflow(x, h, &top)) throw RangeError("count_restricted_interval: x + h overflows");
  SmoothQuery q{.x = top, .y = std::max<std::uint64_t>(hi, 2), .lower = x, .prime_window = PrimeWindow{lo, hi}};
  return psi_exact(q, table, strategy);
}

std::uint64_t psi_with_largest_prime_in(std::uint64_t x, std::uint64_t lo, std::uint64_t hi,
                                        const PrimeTable& table) {
  if (hi <= lo) throw DomainError("psi_with_largest_prime_in: need lo < hi");
  if (x == 0) return 0;
  // #{n <= x : P(n) <= b}, with Psi(x, 1) = 1 (only n = 1).
  auto psi_upto = [&](std::uint64_t b) -> std::uint64_t {
    if (b < 2) return 1;
    return psi_exact(x, b, table);
  };
  return psi_upto(hi) - psi_upto(lo);
}

SmoothSet SmoothSet::build(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                           const SumConstraint& constraint, const CountLimits& limits) {
  if (x == 0) throw DomainError("SmoothSet: x must be positive");
  if (y < 2) throw DomainError("SmoothSet: y must be >= 2");
  std::uint64_t lo = 1;
  std::uint64_t hi = y;
  std::optional<PrimeWindow> largest;
  if (const auto* w = std::get_if<AllPrimesWindow>(&constraint)) {
    lo = std::max(lo, w->window.lo);
    hi = std::min(hi, w->window.hi);
  } else if (const auto* w = std::get_if<LargestPrimeWindow>(&constraint)) {
    hi = std::min(hi, w->window.hi);
    largest = w->window;
  }

  SmoothSet set;
  set.x_ = x;
  set.y_ = y;
  std::span<const std::uint64_t> primes;
  std::size_t offset = 0;
  if (hi > lo) {
    primes = admissible_primes(x, lo, hi, table);
    if (!primes.empty()) offset = static_cast<std::size_t>(primes.data() - table.primes().data());
  }
  RecursiveCounter counter(primes, limits.recursive_node_cap);
  const std::uint64_t total = counter.count(x);
  if (total > limits.enumeration_cap)
    throw ResourceError("smooth set of size " + std::to_string(total) + " exceeds enumeration cap " +
                        std::to_string(limits.enumeration_cap));
  set.nodes_.reserve(total);
  set.member_.reserve(total);

  auto dfs = [&](auto&& self, std::uint64_t n, std::size_t first, std::uint32_t index) -> void {
    for (std::size_t j = first; j < primes.size(); ++j) {
      const std::uint64_t p = primes[j];
      if (p > x / n) break;
      const auto child = static_cast<std::uint32_t>(set.nodes_.size());
      set.nodes_.push_back({n * p, index, static_cast<std::uint32_t>(offset + j)});
      // Primes are appended in non-decreasing order, so p is the largest prime factor.
      set.member_.push_back(!largest || largest->contains(p));
      self(self, n * p, j, child);
    }
  };
  set.nodes_.push_back({1, 0, kNoPrime});
  set.member_.push_back(!largest);
  dfs(dfs, 1, 0, 0);

  set.member_count_ = static_cast<std::size_t>(std::count(set.member_.begin(), set.member_.end(), 1));
  set.primes_used_ = primes.empty() ? 0 : offset + primes.size();
  return set;
}

}  // namespace smoothrmf
