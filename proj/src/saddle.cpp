#include "smoothrmf/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "smoothrmf/compensated.hpp"
#include "smoothrmf/errors.hpp"

namespace smoothrmf {
namespace {

std::span<const std::uint64_t> primes_up_to(std::uint64_t y, const PrimeTable& table) {
  if (y > table.limit()) {
    std::ostringstream msg;
    msg << "prime table limit " << table.limit() << " does not cover y=" << y;
    throw RangeError(msg.str());
  }
  return table.primes().first(table.count_up_to(y));
}

// Derivative of the saddle residual in alpha; always negative.
double saddle_slope(double alpha, std::span<const std::uint64_t> primes) {
  CompensatedSum s;
  for (const std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    const double q = std::expm1(alpha * lp);  // p^alpha - 1
    s += -lp * lp * (q + 1.0) / (q * q);
  }
  return s.value();
}

}  // namespace

double SaddlePoint::variance_split() const {
  if (alpha >= 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(1.0 / (1.0 - alpha));
}

double saddle_residual(double alpha, double log_x, std::span<const std::uint64_t> primes) {
  CompensatedSum s;
  for (const std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    s += lp / std::expm1(alpha * lp);
  }
  s += -log_x;
  return s.value();
}

SaddlePoint solve_saddle(double x, std::uint64_t y, const PrimeTable& table, double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_saddle: tol must be positive");
  if (y < 2 || !(static_cast<double>(y) <= x))
    throw DomainError("solve_saddle: need 2 <= y <= x");
  const auto primes = primes_up_to(y, table);
  const double log_x = std::log(x);

  double lo = 1e-6;
  double hi = 1.5;
  double g_lo = saddle_residual(lo, log_x, primes);
  double g_hi = saddle_residual(hi, log_x, primes);
  if (!(g_lo > 0.0 && g_hi < 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "solve_saddle: no sign change on [1e-6, 1.5] for x=" << x << " y=" << y;
    throw SolverError(msg.str());
  }

  SaddlePoint sp;
  sp.x = x;
  sp.y = y;
  int it = 0;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    const double g = saddle_residual(mid, log_x, primes);
    ++it;
    (g > 0.0 ? lo : hi) = mid;
    (g > 0.0 ? g_lo : g_hi) = g;
  }

  double a = 0.5 * (lo + hi);
  double g = saddle_residual(a, log_x, primes);
  for (int k = 0; k < 100 && std::abs(g) > tol; ++k, ++it) {
    (g > 0.0 ? lo : hi) = a;
    double next = a - g / saddle_slope(a, primes);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == a) break;
    a = next;
    g = saddle_residual(a, log_x, primes);
  }
  if (std::abs(g) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "solve_saddle: residual " << g << " above tolerance " << tol << " for x=" << x << " y=" << y;
    throw SolverError(msg.str());
  }
  sp.alpha = a;
  sp.residual = g;
  sp.iterations = it;
  return sp;
}

double log_zeta_trunc(double sigma, std::uint64_t y, const PrimeTable& table) {
  if (!(sigma > 0.0)) throw DomainError("zeta_trunc: sigma must be positive");
  CompensatedSum s;
  for (const std::uint64_t p : primes_up_to(y, table))
    s += -std::log1p(-std::exp(-sigma * std::log(static_cast<double>(p))));
  return s.value();
}

double zeta_trunc(double sigma, std::uint64_t y, const PrimeTable& table) {
  return std::exp(log_zeta_trunc(sigma, y, table));
}

double log_rankin_bound(double x, std::uint64_t y, double sigma, const PrimeTable& table) {
  if (!(x >= 1.0)) throw DomainError("rankin_bound: x must be >= 1");
  return sigma * std::log(x) + log_zeta_trunc(sigma, y, table);
}

double rankin_bound(double x, std::uint64_t y, double sigma, const PrimeTable& table) {
  return std::exp(log_rankin_bound(x, y, sigma, table));
}

double saddle_approx(double x, double y) {
  if (!(y >= 3.0 && x >= y)) throw DomainError("saddle_approx: need y >= 3 and x >= y");
  const double u = std::log(x) / std::log(y);
  return 1.0 - std::log(u * std::log(u + 1.0)) / std::log(y);
}

std::string formula_name(Formula f) {
  switch (f) {
    case Formula::SaddleApprox: return "saddle_point_approximation";
    case Formula::ExplicitSmoothCount: return "explicit_smooth_count";
    case Formula::Rankin: return "rankin_bound";
    case Formula::RatioInY: return "smooth_ratio_in_y";
  }
  return "unknown";
}

AsymptoticEstimate ht_estimate(double x, std::uint64_t y, const PrimeTable& table) {
  const SaddlePoint sp = solve_saddle(x, y, table);
  const double a = sp.alpha;
  const double lx = std::log(x);
  const double ly = std::log(static_cast<double>(y));
  const double log_value = a * lx + log_zeta_trunc(a, y, table) - std::log(a) -
                           0.5 * std::log(2.0 * std::numbers::pi * (1.0 + lx / static_cast<double>(y)) * lx * ly);
  AsymptoticEstimate est;
  est.value = std::exp(log_value);
  est.formula = Formula::ExplicitSmoothCount;
  est.inputs = {{"x", x}, {"y", static_cast<double>(y)}, {"alpha", a}};
  return est;
}

double xi_residual(double u, double value) {
  return std::abs(std::expm1(value) - u * value) / std::max(1.0, std::exp(value));
}

double xi(double u, double tol) {
  if (!(u >= 1.0)) throw DomainError("xi: u must be >= 1");
  if (u == 1.0) return 0.0;
  // (e^t - 1)/t is increasing from 1 at t = 0, so the positive root is bracketed.
  auto phi_minus_u = [u](double t) { return std::expm1(t) / t - u; };
  double lo = 0.0;
  double hi = 2.0 * std::log(u) + 2.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mid > 0.0 && phi_minus_u(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = xi_residual(u, lo) <= xi_residual(u, hi) ? lo : hi;
  if (xi_residual(u, root) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "xi: residual " << xi_residual(u, root) << " above tolerance for u=" << u;
    throw SolverError(msg.str());
  }
  return root;
}

double dickman_rho(double u, double tol) {
  if (!(u >= 0.0)) throw DomainError("dickman_rho: u must be >= 0");
  if (u <= 1.0) return 1.0;
  if (u <= 2.0) return 1.0 - std::log(u);

  // On [k, k+1] write rho(k + 1 - z) = sum_i c_i z^i, z in [0, 1]. The delay
  // equation maps the coefficients of [k-1, k] to those of [k, k+1]:
  //   (k+1)(i+1) d_{i+1} = c_i + i d_i.
  // The constant term comes from u rho(u) = int_{u-1}^u rho, which at u = k+1 gives
  //   d_0 = (1/k) sum_{i>=1} d_i / (i+1),
  // a sum of positive terms (subtracting from rho(k) instead loses relative accuracy).
  // Each expansion has radius of convergence 2, so terms decay like 2^-i.
  const int terms = std::clamp(static_cast<int>(std::ceil(std::log2(1e3 / tol))) + 16, 40, 200);
  std::vector<double> c(static_cast<std::size_t>(terms));
  c[0] = 1.0 - std::numbers::ln2;  // [1, 2]: rho = 1 - log(2 - z)
  for (int i = 1; i < terms; ++i) c[static_cast<std::size_t>(i)] = 1.0 / (i * std::ldexp(1.0, i));

  const auto k_top = static_cast<int>(std::ceil(u)) - 1;  // u in (k_top, k_top + 1]
  std::vector<double> d(c.size());
  for (int k = 2; k <= k_top; ++k) {
    d[0] = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      d[i + 1] = (c[i] + static_cast<double>(i) * d[i]) / ((k + 1.0) * static_cast<double>(i + 1));
    CompensatedSum tail;
    for (std::size_t i = c.size(); i-- > 1;) tail += d[i] / static_cast<double>(i + 1);
    d[0] = tail.value() / k;
    c.swap(d);
    if (c[0] == 0.0) return 0.0;  // underflow far in the tail
  }
  const double z = static_cast<double>(k_top + 1) - u;
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

RatioInYEstimate psi_ratio_in_y(double x, double y, double d) {
  if (!(d >= 1.0)) throw DomainError("psi_ratio_in_y: d must be >= 1");
  if (!(y / d > 1.0)) throw DomainError("psi_ratio_in_y: y/d must exceed 1");
  if (!(x >= y)) throw DomainError("psi_ratio_in_y: need x >= y");
  const double lx = std::log(x);
  const double u = lx / std::log(y);
  const double u_d = lx / std::log(y / d);

  RatioInYEstimate out;
  out.estimate.formula = Formula::RatioInY;
  out.estimate.value = std::exp((u - u_d) * xi(u));
  out.estimate.inputs = {{"x", x}, {"y", y}, {"d", d}, {"u", u}, {"u_d", u_d}};

  const bool y_ok = std::pow(lx, 4.0) <= y && y <= x;
  const bool d_ok = d >= 2.0 && d <= std::cbrt(y);
  out.estimate.in_stated_range = y_ok && d_ok;
  if (!out.estimate.in_stated_range) {
    out.range = RatioRange::OutsideHypotheses;
    out.estimate.note = "inputs outside (log x)^4 <= y <= x, 2 <= d <= y^(1/3)";
  } else if (y >= std::exp(std::pow(std::log(lx), 5.0 / 3.0))) {
    out.range = RatioRange::BoundedError;
    out.estimate.note = "error term O(1)";
  } else {
    out.range = RatioRange::DecayingError;
    out.estimate.note = "error term O(u exp(-(log u)^(3/5)))";
  }
  return out;
}

}  // namespace smoothrmf
