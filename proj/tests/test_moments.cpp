#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/moments.hpp"
#include "smoothrmf/rng.hpp"
#include "smoothrmf/saddle.hpp"

using namespace smoothrmf;

namespace {
const PrimeTable& table() {
  static const PrimeTable t = sieve(1'000'000, true);
  return t;
}

MonteCarloOptions mc(std::uint64_t samples, std::uint64_t seed, unsigned threads = 0) {
  return MonteCarloOptions{.samples = samples, .seed = seed, .threads = threads};
}

bool same_bits(const MomentEstimate& a, const MomentEstimate& b) {
  return std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
         std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0 && a.n_samples == b.n_samples;
}
}  // namespace

TEST_CASE("RunningStats against two-pass formulas") {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(std::sin(i * 0.37) * 10.0 + i * 1e-3);
  RunningStats all, a, b;
  for (std::size_t i = 0; i < v.size(); ++i) {
    all.add(v[i]);
    (i < 377 ? a : b).add(v[i]);
  }
  a.merge(b);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(all.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
  CHECK(a.mean() == doctest::Approx(mean).epsilon(1e-13));
  CHECK(a.variance() == doctest::Approx(ss / 999.0).epsilon(1e-12));
  CHECK(a.count() == 1000);
  RunningStats empty;
  CHECK(empty.std_error() == 0.0);
}

TEST_CASE("run_streams is independent of the thread count") {
  auto factory = [] { return StreamSampler([](std::uint64_t s) { return uniform01(5, s, 0); }); };
  const auto one = run_streams(1000, 1, factory);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto many = run_streams(1000, t, factory);
    CHECK(std::memcmp(&one, &many, sizeof(RunningStats)) == 0);
  }
}

TEST_CASE("run_streams propagates sampler failures") {
  auto factory = [] {
    return StreamSampler([](std::uint64_t s) -> double {
      if (s == 500) throw std::runtime_error("boom");
      return 1.0;
    });
  };
  CHECK_THROWS_WITH(run_streams(1000, 3, factory), "boom");
}

TEST_CASE("first moment at x = 2, y = 2 is 4/pi") {
  const auto m = estimate_abs_moment(2, 2, table(), mc(10'000, 1));
  CHECK(m.within(4.0 / std::numbers::pi));
  CHECK(m.n_samples == 10'000);
  CHECK(m.std_error > 0.0);
}

TEST_CASE("x = 1 has a single term") {
  const auto m = estimate_abs_moment(1, 2, table(), mc(100, 3));
  CHECK(m.mean == 1.0);
  CHECK(m.std_error == 0.0);
}

TEST_CASE("sample count validation") {
  CHECK_THROWS_AS(estimate_abs_moment(10, 2, table(), mc(1, 0)), DomainError);
  CHECK_THROWS_AS(estimate_ep_moment(0.8, 100, 101.0, 0.0, table(), mc(10, 0)), DomainError);
  CHECK_THROWS_AS(estimate_power_moment(10, 2, 0.0, table(), mc(10, 0)), DomainError);
}

TEST_CASE("first moment never beats Cauchy-Schwarz") {
  for (std::uint64_t x : {100ull, 1000ull, 10'000ull})
    for (std::uint64_t y : {2ull, 7ull, 50ull}) {
      const auto m = estimate_abs_moment(x, y, table(), mc(500, 11));
      CHECK(m.mean <= std::sqrt(static_cast<double>(psi_exact(x, y, table()))) + 3.0 * m.std_error);
    }
}

TEST_CASE("second moment equals the count") {
  for (auto [x, y] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 3}, {1000, 10}, {10'000, 100}}) {
    const auto m = estimate_power_moment(x, y, 1.0, table(), mc(4000, 21));
    CHECK_MESSAGE(m.within(static_cast<double>(psi_exact(x, y, table()))), "x=" << x << " y=" << y);
  }
}

TEST_CASE("power moments are ordered") {
  const auto half = estimate_power_moment(5000, 30, 0.5, table(), mc(2000, 4));
  const auto one = estimate_power_moment(5000, 30, 1.0, table(), mc(2000, 4));
  CHECK(half.mean <= std::sqrt(one.mean) * (1.0 + 3.0 * one.rel_std_error()));
  const auto abs = estimate_abs_moment(5000, 30, table(), mc(2000, 4));
  CHECK(abs.mean == doctest::Approx(half.mean).epsilon(1e-12));
}

TEST_CASE("Euler product moments") {
  const auto second = estimate_ep_moment(0.8, 200, 1.0, 0.3, table(), mc(4000, 8));
  CHECK(second.within(zeta_trunc(0.8, 200, table())));
  const auto zero = estimate_ep_moment(0.8, 200, 0.0, 0.3, table(), mc(100, 8));
  CHECK(zero.mean == 1.0);
  CHECK(zero.std_error == 0.0);
  CHECK(estimate_ep_moment(0.6, 50, 1.0, 0.0, table(), mc(10, 1)).warnings.size() == 1);
  CHECK(estimate_ep_moment(0.8, 50, 1.0, 0.0, table(), mc(10, 1)).warnings.empty());
}

TEST_CASE("exact Euler product moments") {
  // alpha = 1: sum_k r^k = 1/(1-r); alpha = 2: sum_k (k+1)^2 r^k = (1+r)/(1-r)^3.
  double log_second = 0.0, log_fourth = 0.0;
  for (const auto p : oracle::primes_up_to(60)) {
    const double r = std::pow(static_cast<double>(p), -1.1);
    log_second -= std::log1p(-r);
    log_fourth += std::log1p(r) - 3.0 * std::log1p(-r);
  }
  CHECK(log_exact_ep_moment(1.1, 60, 1.0, table()) == doctest::Approx(log_second).epsilon(1e-13));
  CHECK(log_exact_ep_moment(1.1, 60, 2.0, table()) == doctest::Approx(log_fourth).epsilon(1e-13));
  CHECK(log_exact_ep_moment(1.1, 60, 0.0, table()) == 0.0);
}

TEST_CASE("Euler product moments do not depend on t") {
  for (const double alpha : {0.5, 1.5}) {
    const double exact = std::exp(log_exact_ep_moment(1.2, 100, alpha, table()));
    for (const double t : {0.0, 2.5}) {
      CAPTURE(alpha);
      CAPTURE(t);
      CHECK(estimate_ep_moment(1.2, 100, alpha, t, table(), mc(4000, 21)).within(exact));
    }
  }
}

TEST_CASE("integrated second moment equals zeta (Fubini)") {
  const auto m = estimate_ep_integral_moment(0.85, 100, 1.0, EulerIntegralSpec{}, table(), mc(2000, 13));
  CHECK(m.within(zeta_trunc(0.85, 100, table())));
  const auto w = full_line_window(0.85, 100, table());
  CHECK(w.t1 == doctest::Approx(zeta_trunc(0.85, 100, table())));
  CHECK(w.t0 == -w.t1);
}

TEST_CASE("estimates are deterministic across thread counts") {
  const auto a = estimate_abs_moment(20'000, 50, table(), mc(300, 42, 1));
  const auto b = estimate_abs_moment(20'000, 50, table(), mc(300, 42, 4));
  const auto c = estimate_abs_moment(20'000, 50, table(), mc(300, 42, 3));
  CHECK(same_bits(a, b));
  CHECK(same_bits(a, c));
  const auto e1 = estimate_ep_integral_moment(0.9, 100, 0.5, {}, table(), mc(200, 9, 1));
  const auto e2 = estimate_ep_integral_moment(0.9, 100, 0.5, {}, table(), mc(200, 9, 5));
  CHECK(same_bits(e1, e2));
  const auto other = estimate_abs_moment(20'000, 50, table(), mc(300, 43, 1));
  CHECK_FALSE(same_bits(a, other));
}

TEST_CASE("standard error scales like N^-1/2") {
  const auto small = estimate_abs_moment(10'000, 30, table(), mc(1000, 6));
  const auto large = estimate_abs_moment(10'000, 30, table(), mc(4000, 6));
  const double r = small.std_error / large.std_error;
  CHECK(r >= 2.0 * 0.7);
  CHECK(r <= 2.0 * 1.3);
}

TEST_CASE("Dirichlet kernel L1 norm") {
  CHECK(dirichlet_l1(0) == 1.0);
  CHECK(std::abs(dirichlet_l1(1) - 4.0 / std::numbers::pi) <= 1e-8);
  for (std::uint64_t n : {2ull, 5ull, 17ull}) {
    const double m = static_cast<double>(n + 1);
    auto direct = [n](double th) {
      std::complex<double> s{0.0, 0.0};
      for (std::uint64_t k = 0; k <= n; ++k) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) * th);
      return std::abs(s);
    };
    // Simpson on each interval between zeros of the kernel
    double ref = 0.0;
    for (std::uint64_t j = 0; j <= n; ++j) ref += oracle::simpson(direct, j / m, (j + 1) / m, 2000);
    CHECK(dirichlet_l1(n) == doctest::Approx(ref).epsilon(1e-9));
  }
  double prev = 0.0;
  for (std::uint64_t n = 0; n <= 1000; n += (n < 50 ? 1 : 37)) {
    const double v = dirichlet_l1(n);
    CHECK(v >= 1.0);
    CHECK(v <= std::sqrt(static_cast<double>(n + 1)) + 1e-12);
    // grows like (4/pi^2) log N
    if (n > 10) CHECK(std::abs(v - 4.0 / (std::numbers::pi * std::numbers::pi) * std::log(n + 1.0)) < 1.5);
    prev = v;
  }
  CHECK(prev > 1.0);
}

TEST_CASE("Dirichlet L1 matches the y = 2 first moment") {
  const auto m = estimate_abs_moment(1 << 10, 2, table(), mc(10'000, 2));
  CHECK(m.within(dirichlet_l1(10)));
}

TEST_CASE("Plancherel single coefficient") {
  const std::vector<std::complex<double>> a{{1.0, 0.0}};
  for (double sigma : {0.5, 0.7, 1.3}) {
    const auto r = plancherel_check(a, sigma, 1e3);
    CHECK(r.lhs == doctest::Approx(1.0 / (2.0 * sigma)).epsilon(1e-15));
    CHECK(r.gap <= r.tail_bound + 1e-6);
  }
  CHECK_THROWS_AS(plancherel_check(a, 0.0, 10.0), DomainError);
  CHECK_THROWS_AS(plancherel_check(std::vector<std::complex<double>>{}, 0.5, 10.0), DomainError);
}

TEST_CASE("Plancherel with smooth indicator coefficients") {
  std::vector<std::complex<double>> a(100);
  for (std::uint64_t n = 1; n <= 100; ++n) a[n - 1] = oracle::largest_prime_factor(n) <= 3 ? 1.0 : 0.0;
  const auto r = plancherel_check(a, 0.7, 1e3);
  CHECK(r.gap <= r.tail_bound + 1e-6);
  // brute-force left side: numerical integral of |A(x)|^2 x^{-1-2 sigma} on [1, 100], exact tail beyond
  double lhs = 0.0;
  double s = 0.0;
  for (std::uint64_t n = 1; n <= 100; ++n) {
    s += a[n - 1].real();
    const double hi = n < 100 ? n + 1.0 : 0.0;
    const double piece = n < 100 ? (std::pow(n, -1.4) - std::pow(hi, -1.4)) / 1.4 : std::pow(100.0, -1.4) / 1.4;
    lhs += s * s * piece;
  }
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));

  auto doubled = a;
  for (auto& v : doubled) v *= 2.0;
  const auto r2 = plancherel_check(doubled, 0.7, 1e3);
  CHECK(r2.lhs == doctest::Approx(4.0 * r.lhs).epsilon(1e-13));
  CHECK(r2.rhs == doctest::Approx(4.0 * r.rhs).epsilon(1e-12));
}

TEST_CASE("cancellation report rows") {
  const auto rows = cancellation_report(10'000, {3.0, 1.0, 2.0}, table(), mc(300, 42));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].u == 1.0);
  CHECK(rows[1].u == 2.0);
  CHECK(rows[2].u == 3.0);
  CHECK(rows[0].y == 10'000);
  CHECK(rows[1].y == 100);
  CHECK(rows[2].y == 22);
  CHECK(rows[0].ratio < 1.0);
  for (const auto& r : rows) {
    CHECK(r.psi == psi_exact(r.x, r.y, table()));
    CHECK(r.ratio >= 0.0);
    CHECK(r.ci_low <= r.ratio);
    CHECK(r.ci_high >= r.ratio);
    CHECK(r.predicted_saving == doctest::Approx(std::exp(-r.u * std::numbers::ln2 / 2.0)));
    CHECK(r.alpha == solve_saddle(1e4, r.y, table()).alpha);
    CHECK(r.ratio <= 1.0 + 3.0 * r.abs_moment.rel_std_error());
  }
  CHECK_THROWS_AS(cancellation_report(10'000, {0.5}, table(), mc(10, 0)), DomainError);
  CHECK_THROWS_AS(cancellation_report(10'000, {30.0}, table(), mc(10, 0)), DomainError);
}

TEST_CASE("half-line moment") {
  const auto h = estimate_half_line_moment(0.9, table(), mc(200, 1));
  CHECK(h.z == static_cast<std::uint64_t>(std::floor(std::exp(0.2706705664732254 / 0.1))));
  CHECK(h.estimate.mean > 0.0);
  CHECK(h.predicted_scale > 0.0);
  CHECK_THROWS_AS(estimate_half_line_moment(1.0, table(), mc(10, 0)), DomainError);
}
