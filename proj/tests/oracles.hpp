#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's implementation paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

/// Largest prime factor by trial division; 1 for n = 1.
inline std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t largest = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      largest = d;
      n /= d;
    }
  }
  return n > 1 ? n : largest;
}

/// All prime factors of n lie in (lo, hi]; vacuous for n = 1.
inline bool all_factors_in(std::uint64_t n, std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      if (d <= lo || d > hi) return false;
      while (n % d == 0) n /= d;
    }
  }
  return n == 1 || (n > lo && n <= hi);
}

inline std::uint64_t brute_psi(std::uint64_t x, std::uint64_t y, std::uint64_t lower = 0) {
  std::uint64_t c = 0;
  for (std::uint64_t n = lower + 1; n <= x; ++n)
    if (largest_prime_factor(n) <= y) ++c;
  return c;
}

/// Plain bisection to full double resolution.
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
  const bool increasing = g(hi) > g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ((g(mid) < 0.0) == increasing ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Saddle point from the defining equation, summed naively, solved by bisection.
inline double saddle_by_bisection(double x, const std::vector<std::uint64_t>& primes) {
  auto g = [&](double a) {
    double s = -std::log(x);
    for (auto p : primes) s += std::log(static_cast<double>(p)) / (std::pow(static_cast<double>(p), a) - 1.0);
    return s;
  };
  return bisect(g, 1e-6, 1.5);
}

/// Golden-section minimiser of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

/// Newton iteration on e^xi = 1 + u xi from xi = log(u log u) + 1 (u > 1).
inline double xi_newton(double u) {
  double t = std::max(1.0, std::log(u * std::log(u)) + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double h = std::exp(t) - 1.0 - u * t;
    const double dh = std::exp(t) - u;
    const double next = t - h / dh;
    if (std::abs(next - t) < 1e-16 * t) return next;
    t = next;
  }
  return t;
}

/// Dickman rho on the grid u_k = k/m from u rho(u) = int_{u-1}^u rho(t) dt with the
/// trapezoidal rule (implicit in rho(u_k)), then one Richardson extrapolation
/// between m and 2m. Only positive terms are added, so small values keep their
/// relative accuracy. u must sit on the grid.
inline double dickman_grid(double u, int m) {
  auto solve = [u](int steps_per_unit) {
    const double h = 1.0 / steps_per_unit;
    const auto n = static_cast<std::size_t>(std::llround(u * steps_per_unit));
    const auto w = static_cast<std::size_t>(steps_per_unit);
    std::vector<double> rho(n + 1, 1.0);
    for (std::size_t k = w + 1; k <= n; ++k) {
      // summed from the small end; a running window would cancel
      double window = 0.0;
      for (std::size_t j = k - 1; j > k - w; --j) window += rho[j];
      const double uk = static_cast<double>(k) * h;
      rho[k] = h * (0.5 * rho[k - w] + window) / (uk - 0.5 * h);
    }
    return rho[n];
  };
  const double coarse = solve(m);
  const double fine = solve(2 * m);
  return (4.0 * fine - coarse) / 3.0;
}

/// F_y(s) as a direct product of its factors.
inline std::complex<double> euler_product_direct(std::complex<double> s, const std::vector<std::uint64_t>& primes,
                                                 const std::vector<double>& turns) {
  std::complex<double> prod{1.0, 0.0};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::complex<double> fp = std::polar(1.0, 2.0 * std::numbers::pi * turns[i]);
    const std::complex<double> ps = std::exp(-s * std::log(static_cast<double>(primes[i])));
    prod /= (1.0 - fp * ps);
  }
  return prod;
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace oracle
