#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smoothrmf/checks.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/moments.hpp"
#include "smoothrmf/report_io.hpp"
#include "smoothrmf/saddle.hpp"
#include "smoothrmf/smooth.hpp"
#include "smoothrmf/version.hpp"

namespace py = pybind11;
using namespace smoothrmf;

namespace {

py::object to_python(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_python(v));
      return std::move(out);
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return std::move(out);
    }
    default: return py::none();
  }
}

CountStrategy parse_strategy(const std::string& s) {
  if (s == "auto") return CountStrategy::Auto;
  if (s == "scan") return CountStrategy::Scan;
  if (s == "recursive") return CountStrategy::Recursive;
  throw DomainError("unknown strategy '" + s + "' (auto, scan, recursive)");
}

MonteCarloOptions mc(std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  return MonteCarloOptions{.samples = samples, .seed = seed, .threads = threads};
}

}  // namespace

PYBIND11_MODULE(_smoothrmf, m) {
  m.doc() = "Smooth numbers, Steinhaus random multiplicative functions and random Euler products";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  const py::tuple value_bases = py::make_tuple(base, py::handle(PyExc_ValueError));
  py::register_exception<DomainError>(m, "DomainError", value_bases.ptr());
  py::register_exception<RangeError>(m, "RangeError", value_bases.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  py::class_<PrimeTable>(m, "PrimeTable")
      .def_property_readonly("limit", &PrimeTable::limit)
      .def_property_readonly("spf_limit", &PrimeTable::spf_limit)
      .def("__len__", &PrimeTable::size)
      .def("primes", [](const PrimeTable& t) { return std::vector<std::uint64_t>(t.primes().begin(), t.primes().end()); })
      .def("count_up_to", &PrimeTable::count_up_to, py::arg("v"))
      .def("is_prime", &PrimeTable::is_prime, py::arg("n"));

  m.def("sieve", [](std::uint64_t limit, bool spf) { return sieve(limit, spf); }, py::arg("limit"),
        py::arg("spf") = false, "Primes up to limit, optionally with a smallest-prime-factor table.");
  m.def(
      "factorize",
      [](std::uint64_t n, const PrimeTable& t) {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
        for (const auto& e : factorize(n, t).entries) out.emplace_back(e.prime, e.exponent);
        return out;
      },
      py::arg("n"), py::arg("table"));
  m.def("is_smooth", &is_smooth, py::arg("n"), py::arg("y"), py::arg("table"));

  m.def(
      "psi",
      [](std::uint64_t x, std::uint64_t y, const PrimeTable& t, std::uint64_t lower, const std::string& strategy) {
        return psi_exact(SmoothQuery{.x = x, .y = y, .lower = lower, .prime_window = std::nullopt}, t,
                         parse_strategy(strategy));
      },
      py::arg("x"), py::arg("y"), py::arg("table"), py::arg("lower") = 0, py::arg("strategy") = "auto",
      "#{lower < n <= x : P(n) <= y}.");
  m.def("count_restricted_interval",
        [](std::uint64_t x, std::uint64_t h, std::uint64_t lo, std::uint64_t hi, const PrimeTable& t) {
          return count_restricted_interval(x, h, lo, hi, t);
        },
        py::arg("x"), py::arg("h"), py::arg("lo"), py::arg("hi"), py::arg("table"));
  m.def("enumerate_smooth",
        [](std::uint64_t x, std::uint64_t y, const PrimeTable& t) { return enumerate_smooth(x, y, t, true); },
        py::arg("x"), py::arg("y"), py::arg("table"));

  m.def(
      "saddle_point",
      [](double x, std::uint64_t y, const PrimeTable& t, double tol) {
        const auto sp = solve_saddle(x, y, t, tol);
        py::dict d;
        d["alpha"] = sp.alpha;
        d["residual"] = sp.residual;
        d["iterations"] = sp.iterations;
        d["variance_split"] = sp.variance_split();
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("table"), py::arg("tol") = 1e-12);
  m.def("saddle_approx", &saddle_approx, py::arg("x"), py::arg("y"));
  m.def("dickman_rho", [](double u) { return dickman_rho(u); }, py::arg("u"));
  m.def("xi", [](double u) { return xi(u); }, py::arg("u"));
  m.def("log_zeta", &log_zeta_trunc, py::arg("sigma"), py::arg("y"), py::arg("table"));
  m.def("ht_estimate", [](double x, std::uint64_t y, const PrimeTable& t) { return ht_estimate(x, y, t).value; },
        py::arg("x"), py::arg("y"), py::arg("table"));

  m.def(
      "abs_moment",
      [](std::uint64_t x, std::uint64_t y, const PrimeTable& t, std::uint64_t samples, std::uint64_t seed,
         unsigned threads) { return to_python(moment_json(estimate_abs_moment(x, y, t, mc(samples, seed, threads)))); },
      py::arg("x"), py::arg("y"), py::arg("table"), py::arg("samples") = 2000, py::arg("seed") = 0,
      py::arg("threads") = 0, "Monte Carlo E|sum_{n<=x, P(n)<=y} f(n)|.");
  m.def(
      "ep_moment",
      [](double beta, std::uint64_t y, double alpha, double t, const PrimeTable& table, std::uint64_t samples,
         std::uint64_t seed, unsigned threads) {
        return to_python(moment_json(estimate_ep_moment(beta, y, alpha, t, table, mc(samples, seed, threads))));
      },
      py::arg("beta"), py::arg("y"), py::arg("alpha"), py::arg("t"), py::arg("table"), py::arg("samples") = 2000,
      py::arg("seed") = 0, py::arg("threads") = 0, "Monte Carlo E|F_y(beta/2 + it)|^{2 alpha}.");
  m.def("log_exact_ep_moment", &log_exact_ep_moment, py::arg("beta"), py::arg("y"), py::arg("alpha"),
        py::arg("table"));
  m.def("dirichlet_l1", &dirichlet_l1, py::arg("n"));
  m.def(
      "plancherel",
      [](const std::vector<std::complex<double>>& a, double sigma, double t_max) {
        const auto r = plancherel_check(a, sigma, t_max);
        py::dict d;
        d["lhs"] = r.lhs;
        d["rhs"] = r.rhs;
        d["gap"] = r.gap;
        d["tail_bound"] = r.tail_bound;
        d["quadrature_error"] = r.quadrature_error;
        return d;
      },
      py::arg("coefficients"), py::arg("sigma"), py::arg("t_max"));
  m.def(
      "cancellation_report",
      [](std::uint64_t x, const std::vector<double>& us, const PrimeTable& t, std::uint64_t samples,
         std::uint64_t seed, unsigned threads) {
        return to_python(report_json_rows(cancellation_report(x, us, t, mc(samples, seed, threads))));
      },
      py::arg("x"), py::arg("us"), py::arg("table"), py::arg("samples") = 2000, py::arg("seed") = 0,
      py::arg("threads") = 0);
  m.def(
      "run_checks",
      [](const std::vector<int>& ids, std::uint64_t seed, unsigned threads) {
        CheckOptions opts;
        opts.seed = seed;
        opts.threads = threads;
        std::vector<CheckResult> results;
        {
          py::gil_scoped_release release;
          results = run_checks(ids.empty() ? all_check_ids() : ids, opts);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["seconds"] = r.seconds;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("ids") = std::vector<int>{}, py::arg("seed") = 42, py::arg("threads") = 0);
}
