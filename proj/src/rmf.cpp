#include "smoothrmf/rmf.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "smoothrmf/compensated.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/rng.hpp"

namespace smoothrmf {
namespace {

double frac(double t) { return t - std::floor(t); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Complex unit_from_turns(double t) {
  const double r = t - std::nearbyint(t);  // [-1/2, 1/2]
  const double q = std::nearbyint(4.0 * r);
  const double s = r - 0.25 * q;  // [-1/8, 1/8]
  const double c = std::cos(kTwoPi * s);
  const double sn = std::sin(kTwoPi * s);
  switch ((static_cast<int>(q) + 4) % 4) {
    case 0: return {c, sn};
    case 1: return {-sn, c};
    case 2: return {-c, -sn};
    default: return {sn, -c};
  }
}

void fill_phases(std::span<double> out, std::uint64_t seed, std::uint64_t stream_id) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uniform01(seed, stream_id, i);
}

PhaseAssignment sample_phases(std::span<const std::uint64_t> primes, std::uint64_t seed, std::uint64_t stream_id) {
  PhaseAssignment pa;
  pa.seed = seed;
  pa.stream_id = stream_id;
  pa.y_max = primes.empty() ? 0 : primes.back();
  pa.phases.resize(primes.size());
  fill_phases(pa.phases, seed, stream_id);
  return pa;
}

PhaseAssignment sample_phases(const PrimeTable& table, std::uint64_t y, std::uint64_t seed, std::uint64_t stream_id) {
  if (y > table.limit()) throw RangeError("sample_phases: y beyond prime table limit");
  PhaseAssignment pa = sample_phases(table.primes().first(table.count_up_to(y)), seed, stream_id);
  pa.y_max = y;
  return pa;
}

PhaseAssignment constant_phases(const PrimeTable& table, std::uint64_t y, double turns) {
  if (y > table.limit()) throw RangeError("constant_phases: y beyond prime table limit");
  PhaseAssignment pa;
  pa.y_max = y;
  pa.phases.assign(table.count_up_to(y), frac(turns));
  return pa;
}

Complex f_of_n(std::uint64_t n, const PhaseAssignment& phases, const PrimeTable& table) {
  double turns = 0.0;
  for (const auto& [p, a] : factorize(n, table).entries) {
    const auto idx = table.index_of(p);
    if (!idx || *idx >= phases.phases.size() || p > phases.y_max)
      throw RangeError("f_of_n: prime " + std::to_string(p) + " outside phase table");
    turns = frac(turns + frac(static_cast<double>(a) * phases.phases[*idx]));
  }
  return unit_from_turns(turns);
}

Complex partial_sum(const SmoothSet& set, const PhaseAssignment& phases, std::vector<double>& scratch) {
  if (set.primes_used() > phases.phases.size())
    throw RangeError("partial_sum: phase table covers fewer primes than the smooth set uses");
  const auto nodes = set.nodes();
  scratch.resize(nodes.size());
  CompensatedComplexSum sum;
  scratch[0] = 0.0;
  if (set.is_member(0)) sum += Complex{1.0, 0.0};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double t = scratch[nodes[i].parent] + phases.phases[nodes[i].prime_index];
    if (t >= 1.0) t -= 1.0;
    scratch[i] = t;
    if (set.is_member(i)) sum += unit_from_turns(t);
  }
  return sum.value();
}

Complex smooth_partial_sum(std::uint64_t x, std::uint64_t y, const PhaseAssignment& phases,
                           const PrimeTable& table, const CountLimits& limits) {
  return restricted_partial_sum(x, y, std::monostate{}, phases, table, limits);
}

Complex restricted_partial_sum(std::uint64_t x, std::uint64_t y, const SumConstraint& constraint,
                               const PhaseAssignment& phases, const PrimeTable& table, const CountLimits& limits) {
  const SmoothSet set = SmoothSet::build(x, y, table, constraint, limits);
  std::vector<double> scratch;
  return partial_sum(set, phases, scratch);
}

EulerProductEvaluator::EulerProductEvaluator(double sigma, std::uint64_t y, const PrimeTable& table)
    : sigma_(sigma), y_(y) {
  if (!(sigma > 0.0)) throw DomainError("euler product: Re(s) must be positive");
  if (y > table.limit()) throw RangeError("euler product: y beyond prime table limit");
  const auto primes = table.primes().first(table.count_up_to(y));
  radius_.reserve(primes.size());
  turn_rate_.reserve(primes.size());
  for (const std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    radius_.push_back(std::exp(-sigma * lp));
    turn_rate_.push_back(lp / kTwoPi);
  }
}

void EulerProductEvaluator::check(const PhaseAssignment& phases) const {
  if (phases.phases.size() < radius_.size() || phases.y_max < y_)
    throw RangeError("euler product: phase table does not cover primes up to y=" + std::to_string(y_));
}

double EulerProductEvaluator::log_abs_sq(const PhaseAssignment& phases, double t) const {
  check(phases);
  CompensatedSum acc;
  for (std::size_t i = 0; i < radius_.size(); ++i) {
    const double r = radius_[i];
    const double c = unit_from_turns(frac(phases.phases[i] - t * turn_rate_[i])).real();
    // |1 - w|^2 = 1 - 2 r cos + r^2
    const double m = r * (r - 2.0 * c);
    if (1.0 + m < 1e-300) throw DomainError("euler product: factor vanishes");
    acc += -std::log1p(m);
  }
  return acc.value();
}

Complex EulerProductEvaluator::value(const PhaseAssignment& phases, double t) const {
  check(phases);
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t i = 0; i < radius_.size(); ++i) {
    const double r = radius_[i];
    const Complex w = r * unit_from_turns(frac(phases.phases[i] - t * turn_rate_[i]));
    const double a = 1.0 - w.real();
    const double b = -w.imag();
    if (std::hypot(a, b) < 1e-300) throw DomainError("euler product: factor vanishes");
    // -log(1 - w), principal branch.
    re += -0.5 * std::log1p(r * r - 2.0 * w.real());
    im += -std::atan2(b, a);
  }
  return std::polar(std::exp(re.value()), im.value());
}

Complex euler_product(Complex s, std::uint64_t y, const PhaseAssignment& phases, const PrimeTable& table) {
  const EulerProductEvaluator ev(s.real(), y, table);
  return ev.value(phases, s.imag());
}

double max_integral_step(std::uint64_t y) {
  return 1.0 / (8.0 * std::log(static_cast<double>(std::max<std::uint64_t>(y, 2))));
}

double euler_integral(const EulerProductEvaluator& product, const PhaseAssignment& phases, IntegralWindow window,
                      double step, bool weighted) {
  if (!(window.t1 > window.t0)) throw DomainError("euler_integral: empty window");
  if (!(step > 0.0) || step > max_integral_step(product.y()) * (1.0 + 1e-12))
    throw DomainError("euler_integral: step must lie in (0, 1/(8 log y)]");
  auto n = static_cast<std::size_t>(std::ceil((window.t1 - window.t0) / step - 1e-9));
  n = std::max<std::size_t>(n + (n % 2), 2);
  const double h = (window.t1 - window.t0) / static_cast<double>(n);
  const double half_beta = product.sigma();

  auto integrand = [&](double t) {
    const double v = std::exp(product.log_abs_sq(phases, t));
    return weighted ? v / (half_beta * half_beta + t * t) : v;
  };
  CompensatedSum acc;
  for (std::size_t k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * integrand(window.t0 + h * static_cast<double>(k));
  }
  return acc.value() * h / 3.0;
}

double euler_integral(double beta, std::uint64_t y, const PhaseAssignment& phases, const PrimeTable& table,
                      IntegralWindow window, double step, bool weighted) {
  const EulerProductEvaluator ev(beta / 2.0, y, table);
  return euler_integral(ev, phases, window, step, weighted);
}

}  // namespace smoothrmf
