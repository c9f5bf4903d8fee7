#pragma once

// Steinhaus random multiplicative functions: seeded phase assignments,
// values f(n), smooth partial sums and random Euler products.
//
// Phases are kept in turns, theta in [0, 1), and f(p) = e(theta_p) = exp(2 pi i theta_p).
// All phase arithmetic is reduced modulo 1 before the single complex exponential.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "smoothrmf/primes.hpp"
#include "smoothrmf/smooth.hpp"

namespace smoothrmf {

using Complex = std::complex<double>;

/// One Steinhaus sample. phases[i] is the phase of the i-th tabulated prime;
/// every prime <= y_max is covered.
struct PhaseAssignment {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t y_max = 0;
  std::vector<double> phases;
};

/// exp(2 pi i t), with exact values at multiples of a quarter turn.
Complex unit_from_turns(double t);

/// Writes the phases of primes with indices [0, out.size()) for (seed, stream).
void fill_phases(std::span<double> out, std::uint64_t seed, std::uint64_t stream_id);

/// Phases for every prime in `primes` (a prefix of a PrimeTable's primes).
PhaseAssignment sample_phases(std::span<const std::uint64_t> primes, std::uint64_t seed, std::uint64_t stream_id);

/// Phases for the primes <= y of `table`.
PhaseAssignment sample_phases(const PrimeTable& table, std::uint64_t y, std::uint64_t seed,
                              std::uint64_t stream_id);

/// A deterministic assignment with every phase equal to `turns`.
PhaseAssignment constant_phases(const PrimeTable& table, std::uint64_t y, double turns);

/// f(n) = e(sum_p a_p theta_p) for n = prod p^a_p. RangeError if a prime factor
/// of n has no phase.
Complex f_of_n(std::uint64_t n, const PhaseAssignment& phases, const PrimeTable& table);

/// Sum of f(n) over the members of a prebuilt SmoothSet, compensated.
/// `scratch` is resized and reused across calls.
Complex partial_sum(const SmoothSet& set, const PhaseAssignment& phases, std::vector<double>& scratch);

/// sum_{n <= x, P(n) <= y} f(n).
Complex smooth_partial_sum(std::uint64_t x, std::uint64_t y, const PhaseAssignment& phases,
                           const PrimeTable& table, const CountLimits& limits = {});

/// The same sum with a largest-prime or all-prime-factors window applied.
Complex restricted_partial_sum(std::uint64_t x, std::uint64_t y, const SumConstraint& constraint,
                               const PhaseAssignment& phases, const PrimeTable& table,
                               const CountLimits& limits = {});

/// Evaluates F_y(sigma + it) = prod_{p <= y} (1 - f(p) p^{-sigma - it})^{-1} for
/// fixed sigma and y and varying phases and t. Accumulates in the log domain.
class EulerProductEvaluator {
 public:
  EulerProductEvaluator(double sigma, std::uint64_t y, const PrimeTable& table);

  double sigma() const { return sigma_; }
  std::uint64_t y() const { return y_; }
  std::size_t prime_count() const { return radius_.size(); }

  /// log |F_y(sigma + it)|^2.
  double log_abs_sq(const PhaseAssignment& phases, double t) const;
  /// F_y(sigma + it); only the final complex value is meaningful, not a continuous argument.
  Complex value(const PhaseAssignment& phases, double t) const;

 private:
  void check(const PhaseAssignment& phases) const;

  double sigma_;
  std::uint64_t y_;
  std::vector<double> radius_;     // p^-sigma
  std::vector<double> turn_rate_;  // log p / (2 pi)
};

Complex euler_product(Complex s, std::uint64_t y, const PhaseAssignment& phases, const PrimeTable& table);

struct IntegralWindow {
  double t0 = -0.5;
  double t1 = 0.5;
};

/// Largest Simpson step the Euler-product integrals accept for a given y.
double max_integral_step(std::uint64_t y);

/// Composite Simpson value of the integral over the window of |F_y(beta/2 + it)|^2,
/// divided by |beta/2 + it|^2 when `weighted`. DomainError if step > 1/(8 log y).
double euler_integral(const EulerProductEvaluator& product, const PhaseAssignment& phases,
                      IntegralWindow window, double step, bool weighted);

double euler_integral(double beta, std::uint64_t y, const PhaseAssignment& phases, const PrimeTable& table,
                      IntegralWindow window, double step, bool weighted);

}  // namespace smoothrmf
