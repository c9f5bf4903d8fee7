#pragma once

// Monte Carlo estimation of expectations of Steinhaus partial sums and random
// Euler products, exact channels for y = 2 and Plancherel's identity, and the
// cancellation report.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothrmf/primes.hpp"
#include "smoothrmf/rmf.hpp"
#include "smoothrmf/smooth.hpp"
#include "smoothrmf/stats.hpp"

namespace smoothrmf {

struct MonteCarloOptions {
  std::uint64_t samples = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: SMOOTHRMF_THREADS if set, else hardware concurrency
};

/// Threads used when MonteCarloOptions::threads is 0.
unsigned default_thread_count();

/// Streams handled per work unit. Fixed so that results never depend on the thread count.
inline constexpr std::uint64_t kStreamBlock = 64;

struct MomentEstimate {
  std::string statistic;
  std::vector<std::pair<std::string, double>> params;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(N)
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  double rel_std_error() const { return mean != 0.0 ? std_error / std::abs(mean) : 0.0; }
  /// |mean - target| <= k * std_error.
  bool within(double target, double k = 3.0) const { return std::abs(mean - target) <= k * std_error; }
};

using StreamSampler = std::function<double(std::uint64_t stream)>;

/// Evaluates one sample per stream 0..N-1 in parallel and merges the running
/// statistics in stream-block order. Each worker gets its own sampler from
/// `make_sampler`, so samplers may keep mutable scratch state.
RunningStats run_streams(std::uint64_t n_samples, unsigned threads,
                         const std::function<StreamSampler()>& make_sampler);

/// E|sum_{n <= x, P(n) <= y} f(n)| (optionally with a window constraint).
MomentEstimate estimate_abs_moment(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                                   const MonteCarloOptions& opts, const SumConstraint& constraint = {});

/// E|sum f(n)|^{2q}.
MomentEstimate estimate_power_moment(std::uint64_t x, std::uint64_t y, double q, const PrimeTable& table,
                                     const MonteCarloOptions& opts);

/// E|F_y(beta/2 + it)|^{2 alpha}.
MomentEstimate estimate_ep_moment(double beta, std::uint64_t y, double alpha, double t, const PrimeTable& table,
                                  const MonteCarloOptions& opts);

struct EulerIntegralSpec {
  IntegralWindow window{};
  double step = 0.0;  // 0: the largest admissible step for y
  bool weighted = false;
};

/// Exact log E|F_y(beta/2 + it)|^{2 alpha} = sum_p log sum_k ((alpha)_k / k!)^2 p^{-k beta},
/// by independence across primes. Independent of t.
double log_exact_ep_moment(double beta, std::uint64_t y, double alpha, const PrimeTable& table);

/// E(integral of |F_y(beta/2 + it)|^2 [/|beta/2 + it|^2] over the window)^q.
MomentEstimate estimate_ep_integral_moment(double beta, std::uint64_t y, double q, const EulerIntegralSpec& spec,
                                           const PrimeTable& table, const MonteCarloOptions& opts);

/// Window |t| <= zeta(beta, y), used for truncated whole-line integrals.
IntegralWindow full_line_window(double beta, std::uint64_t y, const PrimeTable& table);

/// Euler product close to the half line: E(integral over [-1/2,1/2] of
/// |F_z(alpha/2 + it)|^2)^{2/3} with z = e^{c/(1-alpha)}, and the predicted scale
/// ((1-alpha) sqrt(log 1/(1-alpha)))^{-2/3}. Exploratory, no bound asserted.
struct HalfLineMoment {
  MomentEstimate estimate;
  std::uint64_t z = 0;
  double predicted_scale = 0.0;
};
HalfLineMoment estimate_half_line_moment(double alpha, const PrimeTable& table, const MonteCarloOptions& opts,
                                         double c = 0.2706705664732254);

/// integral over [0,1] of |sum_{k=0}^{N} e(k theta)| d theta, absolute accuracy 1e-8.
double dirichlet_l1(std::uint64_t n_terms);

struct PlancherelResult {
  double lhs = 0.0;         // exact step-function integral
  double rhs = 0.0;         // quadrature over [-T, T]
  double gap = 0.0;         // |lhs - rhs|
  double tail_bound = 0.0;  // (sum |a_n| n^-sigma)^2 / (pi T)
  double quadrature_error = 0.0;
};

/// Both sides of the multiplicative Plancherel identity for a_1..a_M (coefficients[0] is a_1).
PlancherelResult plancherel_check(std::span<const std::complex<double>> coefficients, double sigma, double t_max);

struct ReportRow {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  double u = 0.0;
  double alpha = 0.0;
  std::uint64_t psi = 0;
  MomentEstimate abs_moment;
  double ratio = 0.0;             // mean |S| / sqrt(psi)
  double ci_low = 0.0;            // (mean - 3 se) / sqrt(psi), clamped at 0
  double ci_high = 0.0;           // (mean + 3 se) / sqrt(psi)
  double predicted_saving = 0.0;  // exp(-u log 2 / 2)
  std::optional<double> gmc_saving;  // (log min{1/(1-alpha), log x})^{-1/4} when defined
};

/// One row per u (sorted ascending) with y = round(x^{1/u}).
std::vector<ReportRow> cancellation_report(std::uint64_t x, std::vector<double> us, const PrimeTable& table,
                                           const MonteCarloOptions& opts);

}  // namespace smoothrmf
