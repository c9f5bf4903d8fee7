#include "smoothrmf/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smoothrmf/compensated.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/saddle.hpp"

namespace smoothrmf {
namespace {

using boost::math::quadrature::gauss_kronrod;

MomentEstimate finish(std::string statistic, std::vector<std::pair<std::string, double>> params,
                      const RunningStats& stats, const MonteCarloOptions& opts) {
  MomentEstimate m;
  m.statistic = std::move(statistic);
  m.params = std::move(params);
  m.mean = stats.mean();
  m.std_error = stats.std_error();
  m.n_samples = stats.count();
  m.seed = opts.seed;
  return m;
}

void require_samples(const MonteCarloOptions& opts) {
  if (opts.samples < 2) throw DomainError("Monte Carlo estimates need at least 2 samples");
}

unsigned resolve_threads(unsigned requested) { return requested > 0 ? requested : default_thread_count(); }

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("SMOOTHRMF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunningStats run_streams(std::uint64_t n_samples, unsigned threads, const std::function<StreamSampler()>& make_sampler) {
  const std::uint64_t blocks = (n_samples + kStreamBlock - 1) / kStreamBlock;
  std::vector<RunningStats> partial(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      const StreamSampler sample = make_sampler();
      for (std::uint64_t b = next++; b < blocks; b = next++) {
        const std::uint64_t end = std::min(n_samples, (b + 1) * kStreamBlock);
        for (std::uint64_t s = b * kStreamBlock; s < end; ++s) partial[b].add(sample(s));
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(blocks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  RunningStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

MomentEstimate estimate_abs_moment(std::uint64_t x, std::uint64_t y, const PrimeTable& table,
                                   const MonteCarloOptions& opts, const SumConstraint& constraint) {
  require_samples(opts);
  const SmoothSet set = SmoothSet::build(x, y, table, constraint);
  const RunningStats stats = run_streams(opts.samples, opts.threads, [&]() -> StreamSampler {
    auto phases = std::make_shared<PhaseAssignment>();
    auto scratch = std::make_shared<std::vector<double>>();
    return [&set, &opts, phases, scratch, y](std::uint64_t stream) {
      phases->seed = opts.seed;
      phases->stream_id = stream;
      phases->y_max = y;
      phases->phases.resize(set.primes_used());
      fill_phases(phases->phases, opts.seed, stream);
      return std::abs(partial_sum(set, *phases, *scratch));
    };
  });
  std::vector<std::pair<std::string, double>> params{{"x", static_cast<double>(x)}, {"y", static_cast<double>(y)}};
  std::string name = "abs_partial_sum";
  if (const auto* w = std::get_if<LargestPrimeWindow>(&constraint)) {
    name += "_largest_prime_window";
    params.emplace_back("lo", static_cast<double>(w->window.lo));
    params.emplace_back("hi", static_cast<double>(w->window.hi));
  } else if (const auto* w = std::get_if<AllPrimesWindow>(&constraint)) {
    name += "_all_primes_window";
    params.emplace_back("lo", static_cast<double>(w->window.lo));
    params.emplace_back("hi", static_cast<double>(w->window.hi));
  }
  return finish(name, std::move(params), stats, opts);
}

MomentEstimate estimate_power_moment(std::uint64_t x, std::uint64_t y, double q, const PrimeTable& table,
                                     const MonteCarloOptions& opts) {
  require_samples(opts);
  if (!(q > 0.0)) throw DomainError("estimate_power_moment: q must be positive");
  const SmoothSet set = SmoothSet::build(x, y, table);
  const RunningStats stats = run_streams(opts.samples, opts.threads, [&]() -> StreamSampler {
    auto phases = std::make_shared<PhaseAssignment>();
    auto scratch = std::make_shared<std::vector<double>>();
    return [&set, &opts, phases, scratch, y, q](std::uint64_t stream) {
      phases->y_max = y;
      phases->phases.resize(set.primes_used());
      fill_phases(phases->phases, opts.seed, stream);
      return std::pow(std::norm(partial_sum(set, *phases, *scratch)), q);
    };
  });
  return finish("power_partial_sum",
                {{"x", static_cast<double>(x)}, {"y", static_cast<double>(y)}, {"exponent", 2.0 * q}}, stats, opts);
}

MomentEstimate estimate_ep_moment(double beta, std::uint64_t y, double alpha, double t, const PrimeTable& table,
                                  const MonteCarloOptions& opts) {
  require_samples(opts);
  if (!(std::abs(alpha) <= 100.0)) throw DomainError("estimate_ep_moment: |alpha| must be <= 100");
  const EulerProductEvaluator product(beta / 2.0, y, table);
  const RunningStats stats = run_streams(opts.samples, opts.threads, [&]() -> StreamSampler {
    auto phases = std::make_shared<PhaseAssignment>();
    return [&product, &opts, phases, y, alpha, t](std::uint64_t stream) {
      phases->y_max = y;
      phases->phases.resize(product.prime_count());
      fill_phases(phases->phases, opts.seed, stream);
      if (alpha == 0.0) return 1.0;
      return std::exp(alpha * product.log_abs_sq(*phases, t));
    };
  });
  MomentEstimate m = finish("euler_product_power",
                            {{"beta", beta}, {"y", static_cast<double>(y)}, {"alpha", alpha}, {"t", t}}, stats, opts);
  if (beta < 0.75) m.warnings.emplace_back("beta below 3/4: outside the regime of the expectation estimate");
  return m;
}

double log_exact_ep_moment(double beta, std::uint64_t y, double alpha, const PrimeTable& table) {
  if (!(beta > 0.0)) throw DomainError("log_exact_ep_moment: beta must be positive");
  if (y > table.limit()) throw RangeError("log_exact_ep_moment: y beyond prime table limit");
  CompensatedSum total;
  for (const std::uint64_t p : table.primes().first(table.count_up_to(y))) {
    // E|1 - w r|^{-2 alpha} for w uniform on the circle, r = p^{-beta/2}
    const double r2 = std::exp(-beta * std::log(static_cast<double>(p)));
    double coef = 1.0;  // (alpha)_k / k!
    double power = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 10'000; ++k) {
      coef *= (alpha + k - 1.0) / k;
      power *= r2;
      const double term = coef * coef * power;
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    total += std::log(sum);
  }
  return total.value();
}

MomentEstimate estimate_ep_integral_moment(double beta, std::uint64_t y, double q, const EulerIntegralSpec& spec,
                                           const PrimeTable& table, const MonteCarloOptions& opts) {
  require_samples(opts);
  if (!(q > 0.0)) throw DomainError("estimate_ep_integral_moment: q must be positive");
  const EulerProductEvaluator product(beta / 2.0, y, table);
  const double step = spec.step > 0.0 ? spec.step : max_integral_step(y);
  const RunningStats stats = run_streams(opts.samples, opts.threads, [&]() -> StreamSampler {
    auto phases = std::make_shared<PhaseAssignment>();
    return [&product, &opts, &spec, phases, y, q, step](std::uint64_t stream) {
      phases->y_max = y;
      phases->phases.resize(product.prime_count());
      fill_phases(phases->phases, opts.seed, stream);
      return std::pow(euler_integral(product, *phases, spec.window, step, spec.weighted), q);
    };
  });
  MomentEstimate m = finish("euler_integral_power",
                            {{"beta", beta},
                             {"y", static_cast<double>(y)},
                             {"q", q},
                             {"t0", spec.window.t0},
                             {"t1", spec.window.t1},
                             {"step", step},
                             {"weighted", spec.weighted ? 1.0 : 0.0}},
                            stats, opts);
  if (q < 0.5) m.warnings.emplace_back("q below 1/2: only the lower bound applies");
  return m;
}

IntegralWindow full_line_window(double beta, std::uint64_t y, const PrimeTable& table) {
  const double z = zeta_trunc(beta, y, table);
  return {-z, z};
}

HalfLineMoment estimate_half_line_moment(double alpha, const PrimeTable& table, const MonteCarloOptions& opts,
                                         double c) {
  if (!(alpha >= 0.8 && alpha < 1.0)) throw DomainError("half-line moment: alpha must lie in [4/5, 1)");
  HalfLineMoment out;
  const double z = std::exp(c / (1.0 - alpha));
  out.z = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::floor(z)));
  out.estimate = estimate_ep_integral_moment(alpha, out.z, 2.0 / 3.0, EulerIntegralSpec{}, table, opts);
  out.predicted_scale = std::pow((1.0 - alpha) * std::sqrt(std::log(1.0 / (1.0 - alpha))), -2.0 / 3.0);
  return out;
}

double dirichlet_l1(std::uint64_t n_terms) {
  if (n_terms == 0) return 1.0;
  const double m = static_cast<double>(n_terms) + 1.0;
  // Symmetric about 1/2; between consecutive zeros j/m the kernel is smooth and of
  // one sign. With theta = (j + v)/m, |sin(pi m theta)| = |sin(pi v)| exactly, which
  // avoids evaluating sin at large arguments.
  CompensatedSum total;
  const double half = 0.5 * m;
  for (std::uint64_t j = 0; static_cast<double>(j) < half; ++j) {
    const double jd = static_cast<double>(j);
    auto kernel = [jd, m](double v) {
      const double den = std::sin(std::numbers::pi * (jd + v) / m);
      if (den == 0.0) return m;
      return std::abs(std::sin(std::numbers::pi * v) / den);
    };
    const double v_end = std::min(1.0, half - jd);
    total += gauss_kronrod<double, 31>::integrate(kernel, 0.0, v_end, 12, 1e-13) / m;
  }
  return 2.0 * total.value();
}

PlancherelResult plancherel_check(std::span<const std::complex<double>> coefficients, double sigma, double t_max) {
  if (!(sigma > 0.0)) throw DomainError("plancherel_check: sigma must be positive");
  if (!(t_max > 0.0)) throw DomainError("plancherel_check: T must be positive");
  if (coefficients.empty()) throw DomainError("plancherel_check: need at least one coefficient");
  const std::size_t m = coefficients.size();

  PlancherelResult r;
  // The partial sum is constant on [n, n+1); integrate x^{-1-2 sigma} exactly on each piece.
  CompensatedSum lhs;
  std::complex<double> partial{0.0, 0.0};
  for (std::size_t n = 1; n <= m; ++n) {
    partial += coefficients[n - 1];
    const double dn = static_cast<double>(n);
    const double head = std::exp(-2.0 * sigma * std::log(dn)) / (2.0 * sigma);
    const double piece = n < m ? head * -std::expm1(-2.0 * sigma * std::log1p(1.0 / dn)) : head;
    lhs += std::norm(partial) * piece;
  }
  r.lhs = lhs.value();

  std::vector<double> amp(m);
  std::vector<double> logs(m);
  CompensatedSum abs_sum;
  for (std::size_t n = 1; n <= m; ++n) {
    logs[n - 1] = std::log(static_cast<double>(n));
    amp[n - 1] = std::exp(-sigma * logs[n - 1]);
    abs_sum += std::abs(coefficients[n - 1]) * amp[n - 1];
  }
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < m; ++k)
    if (coefficients[k] != std::complex<double>{0.0, 0.0}) support.push_back(k);
  auto integrand = [&](double t) {
    std::complex<double> a{0.0, 0.0};
    for (const std::size_t k : support) a += coefficients[k] * amp[k] * std::polar(1.0, -t * logs[k]);
    return std::norm(a) / (sigma * sigma + t * t);
  };
  const double panel = std::min(1.0, 2.0 / std::max(1.0, logs.back()));
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * t_max / panel));
  const double width = 2.0 * t_max / static_cast<double>(panels);
  CompensatedSum rhs;
  CompensatedSum err;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = -t_max + width * static_cast<double>(k);
    const double b = k + 1 == panels ? t_max : a + width;
    double e = 0.0;
    rhs += gauss_kronrod<double, 31>::integrate(integrand, a, b, 6, 1e-11, &e);
    err += e;
  }
  r.rhs = rhs.value() / (2.0 * std::numbers::pi);
  r.quadrature_error = err.value() / (2.0 * std::numbers::pi);
  r.gap = std::abs(r.lhs - r.rhs);
  r.tail_bound = abs_sum.value() * abs_sum.value() / (std::numbers::pi * t_max);
  return r;
}

std::vector<ReportRow> cancellation_report(std::uint64_t x, std::vector<double> us, const PrimeTable& table,
                                           const MonteCarloOptions& opts) {
  std::sort(us.begin(), us.end());
  std::vector<ReportRow> rows;
  rows.reserve(us.size());
  for (const double u : us) {
    if (!(u >= 1.0)) throw DomainError("cancellation_report: u must be >= 1");
    ReportRow row;
    row.x = x;
    row.u = u;
    row.y = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(x), 1.0 / u)));
    if (row.y < 2) throw DomainError("cancellation_report: y = round(x^(1/u)) must be >= 2");
    row.y = std::min(row.y, x);
    row.alpha = solve_saddle(static_cast<double>(x), row.y, table).alpha;
    row.psi = psi_exact(x, row.y, table);
    row.abs_moment = estimate_abs_moment(x, row.y, table, opts);
    const double root = std::sqrt(static_cast<double>(row.psi));
    row.ratio = row.abs_moment.mean / root;
    row.ci_low = std::max(0.0, (row.abs_moment.mean - 3.0 * row.abs_moment.std_error) / root);
    row.ci_high = (row.abs_moment.mean + 3.0 * row.abs_moment.std_error) / root;
    row.predicted_saving = std::exp(-u * std::numbers::ln2 / 2.0);
    const double scale = std::min(1.0 / (1.0 - row.alpha), std::log(static_cast<double>(x)));
    if (std::log(scale) > 0.0) row.gmc_saving = std::pow(std::log(scale), -0.25);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace smoothrmf
