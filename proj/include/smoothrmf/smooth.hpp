#pragma once

// Exact counting and enumeration of smooth and prime-restricted integers.
//
// Conventions used throughout:
//   * 1 is y-smooth for every y and vacuously satisfies any all-prime-factors window;
//   * windows on prime factors are half-open, (lo, hi];
//   * a largest-prime-factor window never admits 1 (P(1) is undefined).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "smoothrmf/primes.hpp"

namespace smoothrmf {

/// Half-open range (lo, hi] of admissible primes.
struct PrimeWindow {
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;

  bool contains(std::uint64_t p) const { return p > lo && p <= hi; }
};

struct SmoothQuery {
  std::uint64_t x = 1;      // inclusive upper bound
  std::uint64_t y = 2;      // smoothness bound, ignored when prime_window is set
  std::uint64_t lower = 0;  // exclusive lower bound
  std::optional<PrimeWindow> prime_window;

  /// Throws DomainError if an invariant is violated.
  void validate() const;
};

enum class CountStrategy { Auto, Scan, Recursive };

struct CountLimits {
  std::uint64_t recursive_node_cap = 1'000'000'000;  // nodes visited by the recursive counter
  std::uint64_t enumeration_cap = 50'000'000;        // items materialised by enumerators
  double scan_density_threshold = 0.5;               // Auto picks Scan above this Psi/x estimate
};

/// Exact #{lower < n <= x : every prime factor of n passes the query's condition}.
std::uint64_t psi_exact(const SmoothQuery& query, const PrimeTable& table,
                        CountStrategy strategy = CountStrategy::Auto, const CountLimits& limits = {});

/// Psi(x, y).
std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                        CountStrategy strategy = CountStrategy::Auto);

/// The strategy Auto would pick for this query.
CountStrategy choose_strategy(const SmoothQuery& query, const PrimeTable& table,
                              const CountLimits& limits = {});

/// Visits every y-smooth n <= x exactly once (depth-first, unordered) along with
/// its factorization. Throws ResourceError if Psi(x, y) exceeds limits.enumeration_cap.
void for_each_smooth(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                     const std::function<void(std::uint64_t, const Factorization&)>& visit,
                     const CountLimits& limits = {});

/// All y-smooth n <= x; ascending when `sorted` is set.
std::vector<std::uint64_t> enumerate_smooth(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                                            bool sorted = false, const CountLimits& limits = {});

/// #{x < n <= x + h : p | n => p in (lo, hi]}.
std::uint64_t count_restricted_interval(std::uint64_t x, std::uint64_t h, std::uint64_t lo,
                                        std::uint64_t hi, const PrimeTable& table,
                                        CountStrategy strategy = CountStrategy::Auto);

/// #{2 <= n <= x : P(n) in (lo, hi]}.
std::uint64_t psi_with_largest_prime_in(std::uint64_t x, std::uint64_t lo, std::uint64_t hi,
                                        const PrimeTable& table);

/// Constraint on the integers entering a multiplicative partial sum.
struct LargestPrimeWindow {
  PrimeWindow window;
};
struct AllPrimesWindow {
  PrimeWindow window;
};
using SumConstraint = std::variant<std::monostate, LargestPrimeWindow, AllPrimesWindow>;

/// Depth-first tree of the integers n <= x built from admissible primes (all
/// prime factors <= y, intersected with an AllPrimesWindow if given). Each node
/// records its parent and the prime appended to reach it, so a completely
/// multiplicative function is evaluated in one pass: f(n) = f(parent) * f(p).
/// Parents always precede children. Membership marks which nodes enter a sum.
class SmoothSet {
 public:
  struct Node {
    std::uint64_t value;
    std::uint32_t parent;       // index of n / p; the root (n = 1) is its own parent
    std::uint32_t prime_index;  // index into PrimeTable::primes(); kNoPrime at the root
  };
  static constexpr std::uint32_t kNoPrime = 0xffffffffu;

  static SmoothSet build(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                         const SumConstraint& constraint = {}, const CountLimits& limits = {});

  std::span<const Node> nodes() const { return nodes_; }
  bool is_member(std::size_t i) const { return member_[i] != 0; }
  std::size_t member_count() const { return member_count_; }
  /// Largest prime index referenced plus one (the phase table must cover this many primes).
  std::size_t primes_used() const { return primes_used_; }
  std::uint64_t x() const { return x_; }
  std::uint64_t y() const { return y_; }

 private:
  std::vector<Node> nodes_;
  std::vector<char> member_;
  std::size_t member_count_ = 0;
  std::size_t primes_used_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t y_ = 0;
};

}  // namespace smoothrmf
