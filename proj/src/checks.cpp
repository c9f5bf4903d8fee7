#include "smoothrmf/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "smoothrmf/errors.hpp"
#include "smoothrmf/moments.hpp"
#include "smoothrmf/rng.hpp"
#include "smoothrmf/saddle.hpp"
#include "smoothrmf/smooth.hpp"

namespace smoothrmf {
namespace {

constexpr int kLastCheck = 12;

struct CheckInfo {
  const char* name;
  double budget;
};

// Indexed by check id.
constexpr CheckInfo kChecks[kLastCheck + 1] = {
    {"", 0},
    {"exact counting", 5},
    {"orthogonality identity", 60},
    {"Euler product second moment", 30},
    {"Euler product moment scaling", 120},
    {"integrated moment bracket", 180},
    {"y = 2 exact channel", 30},
    {"multiplicative Plancherel identity", 10},
    {"special functions and saddle point", 10},
    {"saddle point approximation", 10},
    {"recorded constants for smooth comparisons", 120},
    {"cancellation trend", 600},
    {"reproducibility", 0},
};

const PrimeTable& shared_table() {
  static const PrimeTable table = sieve(1'000'000, true);
  return table;
}

MonteCarloOptions mc(const CheckOptions& o, std::uint64_t samples) {
  return MonteCarloOptions{.samples = samples, .seed = o.seed, .threads = o.threads};
}

std::string fmt(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Adds a verdict to a record and to a running pass flag.
struct Verdicts {
  bool all = true;
  std::vector<std::string> failed;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      all = false;
      failed.push_back(what);
    }
  }
};

std::uint64_t grid_y(double x, double u) { return static_cast<std::uint64_t>(std::llround(std::pow(x, 1.0 / u))); }

// Neither strictly increasing along the slices (the grid's largest parameter).
bool not_increasing(const std::vector<double>& per_slice) {
  if (per_slice.size() < 2) return true;
  for (std::size_t i = 1; i < per_slice.size(); ++i)
    if (!(per_slice[i] > per_slice[i - 1])) return true;
  return false;
}

CheckResult exact_counting(const CheckOptions& o) {
  const auto& t = shared_table();
  CheckResult r;
  Verdicts v;
  const auto a = psi_exact(100, 3, t);
  const auto b = psi_exact(10, 2, t);
  v.expect(a == 20, "psi(100,3)");
  v.expect(b == 4, "psi(10,2)");
  Json boundary = Json::array();
  for (std::uint64_t x : {1ull, 2ull, 10ull, 97ull, 1000ull, 65'536ull, 100'000ull}) {
    for (std::uint64_t extra : {0ull, 10ull}) {
      const std::uint64_t y = std::max<std::uint64_t>(2, x + extra);
      const auto c = psi_exact(x, y, t);
      v.expect(c == x, "psi(x,y>=x)=x at x=" + std::to_string(x));
      boundary.push_back({{"x", x}, {"y", y}, {"psi", c}});
    }
  }
  std::uint64_t agree = 0;
  Json mismatches = Json::array();
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::uint64_t x = 1 + random_bits(o.seed, 1, i) % 100'000;
    const std::uint64_t y = 2 + random_bits(o.seed, 2, i) % std::max<std::uint64_t>(1, x - 1);
    const auto scan = psi_exact(x, y, t, CountStrategy::Scan);
    const auto rec = psi_exact(x, y, t, CountStrategy::Recursive);
    if (scan == rec) {
      ++agree;
    } else {
      mismatches.push_back({{"x", x}, {"y", y}, {"scan", scan}, {"recursive", rec}});
    }
  }
  v.expect(agree == 200, "strategy agreement");
  r.record = {{"psi_100_3", a}, {"psi_10_2", b}, {"boundary", boundary}, {"strategy_pairs", 200},
              {"strategy_agreements", agree}, {"mismatches", mismatches}};
  r.passed = v.all;
  r.detail = "psi(100,3)=" + std::to_string(a) + " psi(10,2)=" + std::to_string(b) + " strategies agree on " +
             std::to_string(agree) + "/200";
  return r;
}

CheckResult orthogonality(const CheckOptions& o) {
  const auto& t = shared_table();
  const auto psi = static_cast<double>(psi_exact(10'000, 100, t));
  const auto m = estimate_power_moment(10'000, 100, 1.0, t, mc(o, 4000));
  CheckResult r;
  r.passed = m.within(psi);
  r.record = {{"psi", psi}, {"estimate", moment_json(m)}, {"z", (m.mean - psi) / m.std_error}};
  r.detail = "mean|S|^2=" + fmt(m.mean) + " psi=" + fmt(psi) + " z=" + fmt((m.mean - psi) / m.std_error, 3);
  return r;
}

CheckResult ep_second_moment(const CheckOptions& o) {
  const auto& t = shared_table();
  const double zeta = zeta_trunc(0.8, 200, t);
  const auto m = estimate_ep_moment(0.8, 200, 1.0, 0.3, t, mc(o, 4000));
  CheckResult r;
  r.passed = m.within(zeta);
  r.record = {{"zeta", zeta}, {"estimate", moment_json(m)}, {"z", (m.mean - zeta) / m.std_error}};
  r.detail = "mean|F|^2=" + fmt(m.mean) + " zeta=" + fmt(zeta) + " z=" + fmt((m.mean - zeta) / m.std_error, 3);
  return r;
}

CheckResult ep_scaling(const CheckOptions& o) {
  const auto& t = shared_table();
  const double beta = 0.9;
  const std::uint64_t y = 500;
  const double log_zeta = log_zeta_trunc(beta, y, t);
  CheckResult r;
  Verdicts v;
  Json rows = Json::array();
  std::string detail;
  for (const double a : {0.5, 1.0, 1.5}) {
    const auto m = estimate_ep_moment(beta, y, a, 0.0, t, mc(o, 4000));
    const double expo = std::log(m.mean) / log_zeta;
    const double exact = log_exact_ep_moment(beta, y, a, t) / log_zeta;
    v.expect(std::abs(expo - a * a) <= 0.15, "alpha=" + fmt(a));
    rows.push_back({{"alpha", a}, {"estimate", moment_json(m)}, {"log_ratio", expo}, {"exact_log_ratio", exact}});
    detail += (detail.empty() ? "" : " ") + std::string("a=") + fmt(a, 2) + ":" + fmt(expo, 4);
  }
  r.passed = v.all;
  r.record = {{"beta", beta}, {"y", y}, {"log_zeta", log_zeta}, {"rows", rows}};
  r.detail = "log(mean)/log zeta " + detail;
  return r;
}

CheckResult integral_bracket(const CheckOptions& o) {
  const auto& t = shared_table();
  const double beta = 0.85;
  const double k_exp = 1.0;
  CheckResult r;
  Verdicts v;
  Json rows = Json::array();
  double c_low = INFINITY;
  double c_high = 0.0;
  for (const std::uint64_t y : {100ull, 500ull}) {
    const double lz = log_zeta_trunc(beta, y, t);
    const double ly = std::log(static_cast<double>(y));
    for (const double q : {0.5, 0.75}) {
      const auto m = estimate_ep_integral_moment(beta, y, q, EulerIntegralSpec{}, t, mc(o, 2000));
      const double lower_scale = std::exp(q * q * lz);
      const double upper_scale = std::pow(ly, 1.0 - q) * lower_scale * std::exp(k_exp * std::pow(lz, 8.0 / 11.0));
      const double lo = m.mean / lower_scale;
      const double hi = m.mean / upper_scale;
      c_low = std::min(c_low, lo);
      c_high = std::max(c_high, hi);
      rows.push_back({{"y", y}, {"q", q}, {"zeta", std::exp(lz)}, {"estimate", moment_json(m)},
                      {"lower_ratio", lo}, {"upper_ratio", hi}});
    }
  }
  v.expect(std::isfinite(c_low) && c_low > 0.0, "c > 0");
  v.expect(std::isfinite(c_high), "C finite");
  Json fubini = Json::array();
  std::string fz;
  for (const std::uint64_t y : {100ull, 500ull}) {
    const double zeta = zeta_trunc(beta, y, t);
    const auto m = estimate_ep_integral_moment(beta, y, 1.0, EulerIntegralSpec{}, t, mc(o, 2000));
    v.expect(m.within(zeta), "Fubini y=" + std::to_string(y));
    fubini.push_back({{"y", y}, {"zeta", zeta}, {"estimate", moment_json(m)}, {"z", (m.mean - zeta) / m.std_error}});
    fz += " z(y=" + std::to_string(y) + ")=" + fmt((m.mean - zeta) / m.std_error, 3);
  }
  r.passed = v.all;
  r.record = {{"beta", beta}, {"window", {-0.5, 0.5}}, {"c", c_low}, {"C", c_high}, {"K", k_exp},
              {"grid", rows}, {"fubini", fubini}};
  r.detail = "c=" + fmt(c_low, 4) + " C=" + fmt(c_high, 4) + " K=" + fmt(k_exp, 2) + fz;
  return r;
}

CheckResult y2_channel(const CheckOptions& o) {
  const auto& t = shared_table();
  CheckResult r;
  Verdicts v;
  const double d1 = dirichlet_l1(1);
  v.expect(std::abs(d1 - 4.0 / std::numbers::pi) <= 1e-8, "dirichlet_l1(1)");
  const double d20 = dirichlet_l1(20);
  const auto m = estimate_abs_moment(std::uint64_t{1} << 20, 2, t, mc(o, 10'000));
  v.expect(m.within(d20), "Monte Carlo at 2^20");
  std::uint64_t bound_violations = 0;
  double worst_upper = 0.0;
  for (std::uint64_t n = 0; n <= 1000; ++n) {
    const double d = dirichlet_l1(n);
    if (!(d >= 1.0 && d <= std::sqrt(static_cast<double>(n + 1)))) ++bound_violations;
    worst_upper = std::max(worst_upper, d / std::sqrt(static_cast<double>(n + 1)));
  }
  v.expect(bound_violations == 0, "1 <= l1 <= sqrt(N+1)");
  r.passed = v.all;
  r.record = {{"l1_1", d1}, {"four_over_pi", 4.0 / std::numbers::pi}, {"l1_20", d20}, {"estimate", moment_json(m)},
              {"bound_violations", bound_violations}, {"max_l1_over_sqrt", worst_upper}};
  r.detail = "|l1(1)-4/pi|=" + fmt(std::abs(d1 - 4.0 / std::numbers::pi), 2) + " l1(20)=" + fmt(d20) +
             " MC=" + fmt(m.mean) + "+-" + fmt(m.std_error, 3) + " bound violations=" + std::to_string(bound_violations);
  return r;
}

CheckResult plancherel(const CheckOptions&) {
  const auto& t = shared_table();
  std::vector<std::complex<double>> a(100);
  for (std::uint64_t n = 1; n <= 100; ++n) {
    const auto p = largest_prime_factor(n, t);
    a[n - 1] = (!p || *p <= 3) ? 1.0 : 0.0;
  }
  const auto res = plancherel_check(a, 0.7, 1e4);
  CheckResult r;
  r.passed = res.gap <= res.tail_bound + 1e-6;
  r.record = {{"sigma", 0.7}, {"T", 1e4}, {"lhs", res.lhs}, {"rhs", res.rhs}, {"gap", res.gap},
              {"tail_bound", res.tail_bound}, {"quadrature_error", res.quadrature_error}};
  r.detail = "lhs=" + fmt(res.lhs, 10) + " rhs=" + fmt(res.rhs, 10) + " gap=" + fmt(res.gap, 3) +
             " bound=" + fmt(res.tail_bound + 1e-6, 3);
  return r;
}

CheckResult special_functions(const CheckOptions&) {
  const auto& t = shared_table();
  CheckResult r;
  Verdicts v;
  const double xi1 = xi(1.0);
  v.expect(xi1 == 0.0, "xi(1) = 0");
  const double rho2 = dickman_rho(2.0);
  v.expect(std::abs(rho2 - (1.0 - std::numbers::ln2)) <= 1e-10, "rho(2)");
  double worst_delay = 0.0;
  Json delay = Json::array();
  for (double u = 1.5; u < 10.0; u += 1.0) {
    const double h = 1e-5;
    const double deriv = (dickman_rho(u + h) - dickman_rho(u - h)) / (2.0 * h);
    const double res = std::abs(u * deriv + dickman_rho(u - 1.0));
    worst_delay = std::max(worst_delay, res);
    delay.push_back({{"u", u}, {"residual", res}});
  }
  v.expect(worst_delay <= 1e-6, "delay equation residual");

  double worst_saddle = 0.0;
  std::size_t points = 0;
  auto visit = [&](double x, std::uint64_t y) {
    const auto sp = solve_saddle(x, y, t, 1e-12);
    worst_saddle = std::max(worst_saddle, std::abs(sp.residual));
    ++points;
  };
  for (double x : {1e4, 1e5, 1e6})
    for (int u = 1; u <= 6; ++u) visit(x, grid_y(x, u));
  for (double x : {1e4, 1e6, 1e8})
    for (int u = 2; u <= 6; ++u) visit(x, grid_y(x, u));
  v.expect(worst_saddle <= 1e-12, "saddle residual");

  const auto [sigma, value] = boost::math::tools::brent_find_minima(
      [&t](double s) { return log_rankin_bound(16.0, 4, s, t); }, 0.05, 1.5, 40);
  const double alpha = solve_saddle(16.0, 4, t).alpha;
  v.expect(std::abs(sigma - alpha) <= 1e-6, "Rankin minimiser");
  r.passed = v.all;
  r.record = {{"xi_1", xi1}, {"rho_2", rho2}, {"rho_2_error", std::abs(rho2 - (1.0 - std::numbers::ln2))},
              {"delay_residuals", delay}, {"max_saddle_residual", worst_saddle}, {"saddle_points", points},
              {"rankin_minimiser", sigma}, {"rankin_log_min", value}, {"alpha_16_4", alpha}};
  r.detail = "xi(1)=" + fmt(xi1) + " |rho(2)-(1-log2)|=" + fmt(std::abs(rho2 - (1.0 - std::numbers::ln2)), 2) +
             " delay residual<=" + fmt(worst_delay, 2) + " saddle residual<=" + fmt(worst_saddle, 2) +
             " |argmin-alpha|=" + fmt(std::abs(sigma - alpha), 2);
  return r;
}

CheckResult saddle_approximation(const CheckOptions&) {
  const auto& t = shared_table();
  CheckResult r;
  Verdicts v;
  Json rows = Json::array();
  double worst = 0.0;
  for (double x : {1e4, 1e6, 1e8}) {
    for (int u = 2; u <= 6; ++u) {
      const auto y = grid_y(x, u);
      const double a = solve_saddle(x, y, t).alpha;
      const double approx = saddle_approx(x, static_cast<double>(y));
      const double scaled = std::abs(a - approx) * std::log(static_cast<double>(y));
      worst = std::max(worst, scaled);
      v.expect(scaled <= 5.0, "x=" + fmt(x) + " u=" + std::to_string(u));
      rows.push_back({{"x", x}, {"u", u}, {"y", y}, {"alpha", a}, {"approx", approx}, {"gap_times_log_y", scaled}});
    }
  }
  r.passed = v.all;
  r.record = {{"rows", rows}, {"max_gap_times_log_y", worst}};
  r.detail = "max |alpha - approx| log y = " + fmt(worst, 4) + " (limit 5)";
  return r;
}

CheckResult recorded_constants(const CheckOptions&) {
  const auto& t = shared_table();
  CheckResult r;
  Verdicts v;
  const std::vector<double> xs = {1e4, 1e5, 1e6};

  // Psi(x/d, y) <= C d^{-alpha} Psi(x, y)
  Json comparison = Json::array();
  std::vector<double> slice_c;
  for (const double xd : xs) {
    const auto x = static_cast<std::uint64_t>(xd);
    double c = 0.0;
    for (const std::uint64_t y : {10ull, 30ull, 100ull, 1000ull}) {
      const double a = solve_saddle(xd, y, t).alpha;
      const auto full = static_cast<double>(psi_exact(x, y, t));
      for (const std::uint64_t d : {2ull, 3ull, 5ull, 10ull, 30ull, 100ull}) {
        const auto part = static_cast<double>(psi_exact(x / d, y, t));
        const double ratio = part * std::pow(static_cast<double>(d), a) / full;
        c = std::max(c, ratio);
        comparison.push_back({{"x", x}, {"y", y}, {"d", d}, {"alpha", a}, {"ratio", ratio}});
      }
    }
    slice_c.push_back(c);
  }
  const double c_cmp = *std::max_element(slice_c.begin(), slice_c.end());
  for (const auto& row : comparison) v.expect(row["ratio"].get<double>() <= c_cmp, "comparison direction");
  v.expect(std::isfinite(c_cmp), "comparison constant finite");
  v.expect(not_increasing(slice_c), "comparison constant stable");

  // (1/h) #{x < n <= x+h : p | n => p in (y^delta, y]} <= C Psi(x, y) / (x delta log y)
  Json restricted = Json::array();
  std::vector<double> slice_r;
  for (const double xd : xs) {
    const auto x = static_cast<std::uint64_t>(xd);
    double c = 0.0;
    for (const std::uint64_t y : {100ull, 1000ull}) {
      const double ly = std::log(static_cast<double>(y));
      const auto psi = static_cast<double>(psi_exact(x, y, t));
      for (const double delta : {0.1, 0.2}) {
        const auto lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(std::pow(y, delta))));
        for (const double h_real : {xd / std::cbrt(static_cast<double>(y)), xd / 4.0}) {
          const auto h = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(h_real)));
          const auto count = static_cast<double>(count_restricted_interval(x, h, lo, y, t));
          const double ratio = (count / static_cast<double>(h)) / (psi / (xd * delta * ly));
          c = std::max(c, ratio);
          restricted.push_back({{"x", x}, {"y", y}, {"delta", delta}, {"lo", lo}, {"h", h}, {"count", count},
                                {"ratio", ratio}});
        }
      }
    }
    slice_r.push_back(c);
  }
  const double c_res = *std::max_element(slice_r.begin(), slice_r.end());
  for (const auto& row : restricted) v.expect(row["ratio"].get<double>() <= c_res, "restricted direction");
  v.expect(std::isfinite(c_res), "restricted constant finite");
  v.expect(not_increasing(slice_r), "restricted constant stable");

  r.passed = v.all;
  r.record = {{"comparison_C", c_cmp}, {"comparison_C_by_x", slice_c}, {"comparison", comparison},
              {"restricted_C", c_res}, {"restricted_C_by_x", slice_r}, {"restricted", restricted}};
  auto slices = [](const std::vector<double>& s) {
    std::string out;
    for (const double c : s) out += (out.empty() ? "" : "/") + fmt(c, 4);
    return out;
  };
  r.detail = "comparison C=" + fmt(c_cmp, 4) + " (by x " + slices(slice_c) + "), restricted C=" + fmt(c_res, 4) +
             " (by x " + slices(slice_r) + ")";
  if (!v.all) r.detail += " failed: " + v.failed.front();
  return r;
}

CheckResult cancellation(const CheckOptions& o) {
  const auto& t = shared_table();
  const std::vector<double> us = {2, 3, 4, 5, 6};
  const auto rows = cancellation_report(1'000'000, us, t, mc(o, 2000));
  CheckResult r;
  Verdicts v;
  std::vector<double> log_ratio;
  std::vector<double> log_se;
  for (const auto& row : rows) {
    const double rel = row.abs_moment.rel_std_error();
    v.expect(row.ratio <= 1.0 + 3.0 * rel, "ratio bound at u=" + fmt(row.u));
    log_ratio.push_back(std::log(row.ratio));
    log_se.push_back(rel);  // delta method: se(log m) ~ se(m) / m
  }
  Json steps = Json::array();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double drop = log_ratio[i - 1] - log_ratio[i];
    const double noise = 3.0 * std::hypot(log_se[i - 1], log_se[i]);
    v.expect(drop > noise, "decrease from u=" + fmt(rows[i - 1].u) + " to u=" + fmt(rows[i].u));
    steps.push_back({{"from_u", rows[i - 1].u}, {"to_u", rows[i].u}, {"drop", drop}, {"three_sigma", noise}});
  }
  double su = 0, sl = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    su += rows[i].u;
    sl += log_ratio[i];
  }
  const double n = static_cast<double>(rows.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    num += (rows[i].u - su / n) * (log_ratio[i] - sl / n);
    den += (rows[i].u - su / n) * (rows[i].u - su / n);
  }
  const double slope = num / den;
  v.expect(slope <= -0.1, "slope");
  r.passed = v.all;
  r.record = {{"rows", report_json_rows(rows)}, {"steps", steps}, {"slope", slope}};
  std::string ratios;
  for (const auto& row : rows) ratios += (ratios.empty() ? "" : ",") + fmt(row.ratio, 4);
  r.detail = "ratios " + ratios + " slope=" + fmt(slope, 4);
  if (!v.all) r.detail += " failed: " + v.failed.front();
  return r;
}

CheckResult run_single(int id, const CheckOptions& o) {
  switch (id) {
    case 1: return exact_counting(o);
    case 2: return orthogonality(o);
    case 3: return ep_second_moment(o);
    case 4: return ep_scaling(o);
    case 5: return integral_bracket(o);
    case 6: return y2_channel(o);
    case 7: return plancherel(o);
    case 8: return special_functions(o);
    case 9: return saddle_approximation(o);
    case 10: return recorded_constants(o);
    case 11: return cancellation(o);
    default: throw DomainError("unknown check id " + std::to_string(id));
  }
}

CheckResult timed(int id, const std::function<CheckResult()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
    r.record = {{"error", e.what()}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.id = id;
  r.name = kChecks[id].name;
  r.budget_seconds = kChecks[id].budget;
  if (r.budget_seconds > 0.0 && r.seconds > r.budget_seconds) {
    r.passed = false;
    r.detail += " (over time budget " + fmt(r.budget_seconds) + " s)";
  }
  return r;
}

}  // namespace

std::vector<int> all_check_ids() {
  std::vector<int> ids;
  for (int i = 1; i <= kLastCheck; ++i) ids.push_back(i);
  return ids;
}

std::string check_name(int id) {
  if (id < 1 || id > kLastCheck) throw DomainError("unknown check id " + std::to_string(id));
  return kChecks[id].name;
}

std::vector<CheckResult> run_checks(const std::vector<int>& ids, const CheckOptions& opts) {
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const int id : sorted) check_name(id);

  std::vector<CheckResult> out;
  for (const int id : sorted) {
    if (id == kLastCheck) continue;
    out.push_back(timed(id, [&] { return run_single(id, opts); }));
  }
  if (!sorted.empty() && sorted.back() == kLastCheck) {
    out.push_back(timed(kLastCheck, [&] {
      const unsigned first_threads = opts.threads > 0 ? opts.threads : default_thread_count();
      CheckOptions again = opts;
      again.threads = first_threads == 1 ? 3 : 1;
      std::vector<CheckResult> first;
      std::vector<CheckResult> second;
      for (int id = 1; id < kLastCheck; ++id) {
        const auto prior = std::find_if(out.begin(), out.end(), [id](const CheckResult& c) { return c.id == id; });
        first.push_back(prior != out.end() ? *prior : timed(id, [&] { return run_single(id, opts); }));
        second.push_back(timed(id, [&] { return run_single(id, again); }));
      }
      CheckResult r;
      Json differing = Json::array();
      for (std::size_t i = 0; i < first.size(); ++i)
        if (first[i].record.dump() != second[i].record.dump()) differing.push_back(first[i].id);
      const std::string a = checks_document(first, opts).dump(2);
      const std::string b = checks_document(second, opts).dump(2);
      r.passed = a == b;
      r.record = {{"threads_first", first_threads}, {"threads_second", again.threads}, {"bytes", a.size()},
                  {"differing_checks", differing}};
      r.detail = "checks 1-11 re-run with " + std::to_string(again.threads) + " vs " + std::to_string(first_threads) +
                 " threads: " + (r.passed ? "byte-identical" : "differ") + " (" + std::to_string(a.size()) +
                 " bytes)";
      return r;
    }));
  }
  return out;
}

Json checks_document(const std::vector<CheckResult>& results, const CheckOptions& opts) {
  Json rows = Json::array();
  Json ids = Json::array();
  for (const auto& r : results) {
    ids.push_back(r.id);
    rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"record", r.record}});
  }
  return make_document({{"command", "check"}, {"checks", ids}}, rows, opts.seed, {{"prime_table_limit", 1'000'000}});
}

std::string format_check_line(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%-4s %2d  %-42s %8.2fs  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace smoothrmf
