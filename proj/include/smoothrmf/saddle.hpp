#pragma once

// Deterministic analytic machinery around smooth numbers: the saddle point,
// truncated Euler products, the Rankin bound, the Hildebrand-Tenenbaum main
// term, and the special functions xi(u) and Dickman's rho(u).

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smoothrmf/primes.hpp"

namespace smoothrmf {

struct SaddlePoint {
  double alpha = 1.0;
  double x = 0.0;
  std::uint64_t y = 0;
  double residual = 0.0;  // sum_{p<=y} log p / (p^alpha - 1) - log x
  int iterations = 0;

  /// e^{1/(1-alpha)}: primes below this scale carry the variance of the Euler product.
  double variance_split() const;
};

/// Left side minus log x of the saddle-point equation, summed with compensation.
double saddle_residual(double alpha, double log_x, std::span<const std::uint64_t> primes);

/// Unique root alpha of sum_{p<=y} log p/(p^alpha - 1) = log x. Bisection on
/// [1e-6, 1.5] followed by safeguarded Newton; |residual| <= tol on return.
SaddlePoint solve_saddle(double x, std::uint64_t y, const PrimeTable& table, double tol = 1e-12);

/// log zeta(sigma, y) = -sum_{p<=y} log(1 - p^-sigma).
double log_zeta_trunc(double sigma, std::uint64_t y, const PrimeTable& table);
double zeta_trunc(double sigma, std::uint64_t y, const PrimeTable& table);

/// x^sigma zeta(sigma, y), an upper bound for Psi(x, y) for every sigma > 0.
double log_rankin_bound(double x, std::uint64_t y, double sigma, const PrimeTable& table);
double rankin_bound(double x, std::uint64_t y, double sigma, const PrimeTable& table);

/// 1 - log(u log(u+1)) / log y.
double saddle_approx(double x, double y);

enum class Formula { SaddleApprox, ExplicitSmoothCount, Rankin, RatioInY };
std::string formula_name(Formula f);

struct AsymptoticEstimate {
  double value = 0.0;
  Formula formula = Formula::ExplicitSmoothCount;
  std::vector<std::pair<std::string, double>> inputs;
  bool in_stated_range = true;  // whether the inputs satisfy the source estimate's hypotheses
  std::string note;
};

/// x^a zeta(a,y) / (a sqrt(2 pi (1 + log x / y) log x log y)) at the saddle point a.
AsymptoticEstimate ht_estimate(double x, std::uint64_t y, const PrimeTable& table);

/// Root of e^xi = 1 + u xi with xi(1) = 0. The residual |e^xi - 1 - u xi| is
/// measured relative to max(1, e^xi).
double xi(double u, double tol = 1e-13);
double xi_residual(double u, double value);

/// Dickman's rho: 1 on [0, 1], and u rho'(u) = -rho(u - 1) beyond.
double dickman_rho(double u, double tol = 1e-16);

/// Which error regime of the y-comparison estimate a query falls in.
enum class RatioRange { OutsideHypotheses, BoundedError, DecayingError };

struct RatioInYEstimate {
  AsymptoticEstimate estimate;
  RatioRange range = RatioRange::OutsideHypotheses;
};

/// Predicted Psi(x, y/d) / Psi(x, y) = exp((u - u_d) xi(u)), u_d = log x / log(y/d).
RatioInYEstimate psi_ratio_in_y(double x, double y, double d);

}  // namespace smoothrmf
