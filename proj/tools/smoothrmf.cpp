// smoothrmf: command-line front end.
//
// Exit codes: 0 success, 1 failed check, 2 invalid input, 3 resource limit.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smoothrmf/checks.hpp"
#include "smoothrmf/errors.hpp"
#include "smoothrmf/moments.hpp"
#include "smoothrmf/report_io.hpp"
#include "smoothrmf/saddle.hpp"
#include "smoothrmf/smooth.hpp"
#include "smoothrmf/version.hpp"

using namespace smoothrmf;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitResource = 3;

// Flat JSON object mirroring the flags, e.g. {"x": 1000000, "u": [2, 3], "seed": 42}.
// Keys naming a global option go to the root, everything else to the chosen subcommand.
class JsonConfig : public CLI::Config {
 public:
  JsonConfig(std::string subcommand, std::set<std::string> globals)
      : subcommand_(std::move(subcommand)), globals_(std::move(globals)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json doc;
    try {
      doc = Json::parse(input);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (key == "command" || key == "config") continue;
      CLI::ConfigItem item;
      item.name = key;
      if (!globals_.count(key) && !subcommand_.empty()) item.parents = {subcommand_};
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return std::to_string(static_cast<long long>(d));
      return format_double(d);
    }
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  std::string subcommand_;
  std::set<std::string> globals_;
};

struct Output {
  std::string text;  // plain output for --format text
  Table table;
  Json config = Json::object();
  Json results;
  Json grid = Json::object();
  std::uint64_t seed = 0;
  std::optional<std::string> svg;
};

struct Globals {
  std::string format = "text";
  std::string output;
  unsigned threads = 0;
  bool stamp = false;
};

std::string json_error(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}}.dump();
}

std::string stamp_text() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("generated ") + buf + " by smoothrmf " + kVersion;
}

PrimeTable table_for(std::uint64_t prime_limit, std::uint64_t spf_wanted_up_to = 0) {
  const SieveCaps caps;
  const std::uint64_t spf = spf_wanted_up_to <= caps.spf_cap ? spf_wanted_up_to : 0;
  const std::uint64_t limit = std::max<std::uint64_t>({2, prime_limit, spf});
  return sieve(limit, spf >= limit && spf > 0, caps);
}

Json params_json(const std::vector<std::pair<std::string, double>>& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

Output moment_output(const MomentEstimate& m) {
  Output o;
  o.results = moment_json(m);
  o.seed = m.seed;
  o.table.columns = {"statistic"};
  std::vector<Cell> row{m.statistic};
  for (const auto& [k, v] : m.params) {
    o.table.columns.push_back(k);
    row.emplace_back(v);
  }
  for (const char* c : {"mean", "stderr", "n_samples", "seed"}) o.table.columns.emplace_back(c);
  row.emplace_back(m.mean);
  row.emplace_back(m.std_error);
  row.emplace_back(m.n_samples);
  row.emplace_back(m.seed);
  o.table.rows.push_back(std::move(row));
  std::ostringstream t;
  t << "mean " << format_double(m.mean) << "\nstderr " << format_double(m.std_error) << "\nn_samples "
    << m.n_samples << "\n";
  for (const auto& w : m.warnings) t << "warning " << w << "\n";
  o.text = t.str();
  return o;
}

Output single_value(const std::string& name, double value, Json config) {
  Output o;
  o.config = std::move(config);
  o.results = {{name, value}};
  o.table.columns = {name};
  o.table.rows.push_back({value});
  o.text = format_double(value) + "\n";
  return o;
}

Output report_output(const std::vector<ReportRow>& rows, Json config, std::uint64_t seed, Json grid) {
  Output o;
  o.config = std::move(config);
  o.results = report_json_rows(rows);
  o.table = report_table(rows);
  o.seed = seed;
  o.grid = std::move(grid);
  std::ostringstream t;
  t << "      u        y          psi     alpha     E|S|    stderr    ratio  [ci_low, ci_high]  predicted\n";
  for (const auto& r : rows) {
    char line[200];
    std::snprintf(line, sizeof line, "%7.3f %8llu %12llu %9.5f %8.3f %9.4f %8.4f  [%.4f, %.4f]   %.4f\n", r.u,
                  static_cast<unsigned long long>(r.y), static_cast<unsigned long long>(r.psi), r.alpha,
                  r.abs_moment.mean, r.abs_moment.std_error, r.ratio, r.ci_low, r.ci_high, r.predicted_saving);
    t << line;
  }
  o.text = t.str();
  o.svg = render_report_svg(rows, "cancellation report, x = " + std::to_string(rows.front().x));
  return o;
}

void emit(const Output& o, const Globals& g, const std::string& command) {
  std::ostringstream body;
  if (g.format == "text") {
    if (g.stamp) body << "# " << stamp_text() << "\n";
    body << o.text;
  } else if (g.format == "csv") {
    write_csv(body, o.table, g.stamp ? std::optional<std::string>(stamp_text()) : std::nullopt);
  } else if (g.format == "json") {
    Json config = o.config;
    config["command"] = command;
    Json doc = make_document(config, o.results, o.seed, o.grid);
    if (g.stamp) doc["provenance"]["stamp"] = stamp_text();
    body << doc.dump(2) << "\n";
  } else {
    if (!o.svg) throw DomainError("format svg is only available for report and plot");
    if (g.stamp) body << "<!-- " << stamp_text() << " -->\n";
    body << *o.svg;
  }
  if (g.output.empty() || g.output == "-") {
    std::cout << body.str() << std::flush;
  } else {
    std::ofstream out(g.output, std::ios::binary);
    if (!out) throw DomainError("cannot open output file " + g.output);
    out << body.str();
    if (!out) throw ResourceError("failed writing " + g.output);
  }
}

std::string find_subcommand(int argc, char** argv, const std::set<std::string>& names) {
  for (int i = 1; i < argc; ++i)
    if (names.count(argv[i])) return argv[i];
  return {};
}

std::string peek_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothrmf " + std::string(kVersion) +
               ": smooth numbers, Steinhaus random multiplicative functions and random Euler products"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json", "svg"}))
      ->capture_default_str();
  app.add_option("--output,-o", g.output, "Write the artifact here instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads; 0 = SMOOTHRMF_THREADS or all cores")
      ->check(CLI::Range(0u, 1024u))
      ->capture_default_str();
  app.add_flag("--stamp", g.stamp, "Add a generation timestamp in a comment line");
  const std::set<std::string> globals = {"format", "output", "threads", "stamp"};

  // Shared parameter storage; each subcommand registers what it uses.
  std::uint64_t x = 0, y = 0, lower = 0, samples = 2000, seed = 0, n_terms = 0;
  std::uint64_t lo = 0, hi = 0;
  double u_value = 0.0, sigma = 0.0, beta = 0.0, alpha = 1.0, t = 0.0, q = 1.0, tol = 1e-12, t_max = 1e4;
  double t0 = -0.5, t1 = 0.5, step = 0.0;
  bool weighted = false, full_line = false, log_form = false;
  std::string strategy = "auto", window = "none", input;
  std::vector<double> us;
  std::vector<int> check_ids;
  std::vector<double> coefficients;

  const auto x_range = CLI::Range(std::uint64_t{1}, std::uint64_t{1'000'000'000'000'000ull});
  const auto y_range = CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000});
  const auto samples_range = CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000});

  auto* psi = app.add_subcommand("psi", "Psi(x, y) = #{lower < n <= x : P(n) <= y}, exact");
  psi->add_option("--x", x, "Upper bound x")->required()->check(x_range);
  psi->add_option("--y", y, "Smoothness bound y")->required()->check(y_range);
  psi->add_option("--lower", lower, "Exclusive lower bound")->capture_default_str();
  psi->add_option("--strategy", strategy, "Counting strategy")
      ->check(CLI::IsMember({"auto", "scan", "recursive"}))
      ->capture_default_str();

  auto* alpha_cmd = app.add_subcommand(
      "alpha", "Saddle point alpha(x, y): sum_{p<=y} log p / (p^alpha - 1) = log x, with 1 - log(u log(u+1)) / log y");
  alpha_cmd->add_option("--x", x, "x")->required()->check(x_range);
  alpha_cmd->add_option("--y", y, "y (2 <= y <= x)")->required()->check(y_range);
  alpha_cmd->add_option("--tol", tol, "Residual tolerance")->check(CLI::Range(1e-15, 1e-3))->capture_default_str();

  auto* rho = app.add_subcommand("rho", "Dickman rho(u): rho = 1 on [0, 1], u rho'(u) = -rho(u - 1)");
  rho->add_option("--u", u_value, "u")->required()->check(CLI::Range(0.0, 1000.0));

  auto* xi_cmd = app.add_subcommand("xi", "xi(u): root of e^xi = 1 + u xi, xi(1) = 0");
  xi_cmd->add_option("--u", u_value, "u")->required()->check(CLI::Range(1.0, 1e300));

  auto* zeta = app.add_subcommand("zeta", "zeta(sigma, y) = prod_{p<=y} (1 - p^-sigma)^-1");
  zeta->add_option("--sigma", sigma, "sigma > 0")->required()->check(CLI::PositiveNumber);
  zeta->add_option("--y", y, "y")->required()->check(y_range);
  zeta->add_flag("--log", log_form, "Print log zeta(sigma, y)");

  auto* mc_sum = app.add_subcommand(
      "mc-sum", "E|sum_{n<=x, P(n)<=y} f(n)| (or E|.|^{2q} with --q) for Steinhaus f, by Monte Carlo");
  mc_sum->add_option("--x", x, "x")->required()->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1'000'000'000'000}));
  mc_sum->add_option("--y", y, "y")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
  mc_sum->add_option("--q", q, "Report E|S|^{2q} instead of E|S|")->check(CLI::Range(1e-3, 8.0));
  mc_sum->add_option("--window", window, "Prime window: none, largest (P(n) in (lo, hi]) or all (p | n => p in (lo, hi])")
      ->check(CLI::IsMember({"none", "largest", "all"}))
      ->capture_default_str();
  mc_sum->add_option("--lo", lo, "Window lower end (exclusive)");
  mc_sum->add_option("--hi", hi, "Window upper end (inclusive)");

  auto* mc_ep = app.add_subcommand("mc-ep", "E|F_y(beta/2 + it)|^{2 alpha}, F_y(s) = prod_{p<=y} (1 - f(p) p^-s)^-1");
  mc_ep->add_option("--beta", beta, "beta (warning below 3/4)")->required()->check(CLI::Range(0.01, 10.0));
  mc_ep->add_option("--y", y, "y")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
  mc_ep->add_option("--alpha", alpha, "Moment exponent alpha")->check(CLI::Range(-100.0, 100.0))->capture_default_str();
  mc_ep->add_option("--t", t, "Imaginary shift t")->capture_default_str();

  auto* mc_int = app.add_subcommand(
      "mc-ep-integral", "E(int_{t0}^{t1} |F_y(beta/2 + it)|^2 [/|beta/2 + it|^2] dt)^q by Monte Carlo and Simpson's rule");
  mc_int->add_option("--beta", beta, "beta")->required()->check(CLI::Range(0.01, 10.0));
  mc_int->add_option("--y", y, "y")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{100'000'000}));
  mc_int->add_option("--q", q, "Exponent q")->check(CLI::Range(1e-3, 4.0))->capture_default_str();
  mc_int->add_option("--t0", t0, "Window start")->capture_default_str();
  mc_int->add_option("--t1", t1, "Window end")->capture_default_str();
  mc_int->add_option("--step", step, "Simpson step, at most 1/(8 log y); 0 = largest allowed")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  mc_int->add_flag("--weighted", weighted, "Divide the integrand by |beta/2 + it|^2");
  mc_int->add_flag("--full-line", full_line, "Use the window |t| <= zeta(beta, y)");

  auto* plan = app.add_subcommand(
      "plancherel",
      "int_1^inf |sum_{n<=x} a_n|^2 x^{-1-2 sigma} dx against (1/2 pi) int_{-T}^{T} |A(sigma+it)/(sigma+it)|^2 dt");
  plan->add_option("--sigma", sigma, "sigma > 0")->required()->check(CLI::PositiveNumber);
  plan->add_option("--T", t_max, "Truncation T")->check(CLI::Range(1.0, 1e6))->capture_default_str();
  plan->add_option("--x", x, "Use a_n = 1 for y-smooth n <= x (with --y)")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000}));
  plan->add_option("--y", y, "Smoothness bound for the indicator coefficients")->check(y_range);
  plan->add_option("--coefficients", coefficients, "Explicit real coefficients a_1,...,a_M")->delimiter(',');

  auto* dl1 = app.add_subcommand("dirichlet-l1", "int_0^1 |sum_{k=0}^{N} e(k theta)| d theta, absolute accuracy 1e-8");
  dl1->add_option("--n", n_terms, "N")->required()->check(CLI::Range(std::uint64_t{0}, std::uint64_t{10'000'000}));

  auto* report = app.add_subcommand(
      "report", "Cancellation report: E|S| / sqrt(Psi(x, y)) for y = round(x^{1/u}), next to exp(-u log 2 / 2)");
  report->add_option("--x", x, "x")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));
  report->add_option("--u", us, "Comma-separated u values (>= 1)")->required()->delimiter(',')->check(
      CLI::Range(1.0, 64.0));

  auto* check = app.add_subcommand("check", "Run the acceptance checks and print a PASS/FAIL table");
  check->add_option("--ids", check_ids, "Comma-separated check ids (default: all)")
      ->delimiter(',')
      ->check(CLI::Range(1, 12));

  auto* plot = app.add_subcommand("plot", "SVG plot of a report: ratio against u with 3-sigma whiskers");
  plot->add_option("--input", input, "Report file (.csv or .json); otherwise computed from --x and --u")
      ->check(CLI::ExistingFile);
  plot->add_option("--x", x, "x")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1'000'000'000}));
  plot->add_option("--u", us, "Comma-separated u values")->delimiter(',')->check(CLI::Range(1.0, 64.0));

  for (auto* sub : {mc_sum, mc_ep, mc_int, report, plot}) {
    sub->add_option("--samples", samples, "Monte Carlo samples N")->check(samples_range)->capture_default_str();
    sub->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  }
  std::uint64_t check_seed = 42;
  check->add_option("--seed", check_seed, "64-bit seed")->capture_default_str();

  std::set<std::string> names;
  for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) names.insert(sub->get_name());

  // The config file may name the command when none is given.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string sub_name = find_subcommand(argc, argv, names);
  const std::string config_path = peek_config_path(argc, argv);
  if (!config_path.empty()) {
    if (sub_name.empty()) {
      std::ifstream in(config_path);
      try {
        const Json doc = Json::parse(in);
        if (doc.is_object() && doc.contains("command") && doc["command"].is_string()) {
          sub_name = doc["command"].get<std::string>();
          args.push_back(sub_name);
        }
      } catch (const std::exception&) {
        // reported by the config parser below
      }
    }
  }
  app.set_config("--config", "", "JSON file mirroring the flags; flags given on the command line win")
      ->check(CLI::ExistingFile);
  app.config_formatter(std::make_shared<JsonConfig>(sub_name, globals));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json_error("validation", e.what()) << std::endl;
    return kExitInvalid;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const MonteCarloOptions mc{.samples = samples, .seed = seed, .threads = g.threads};

  try {
    Output out;
    if (command == "psi") {
      const CountStrategy s = strategy == "scan" ? CountStrategy::Scan
                              : strategy == "recursive" ? CountStrategy::Recursive
                                                        : CountStrategy::Auto;
      const PrimeTable table = table_for(std::min(x, y), s == CountStrategy::Recursive ? 0 : x);
      const SmoothQuery query{.x = x, .y = y, .lower = lower, .prime_window = std::nullopt};
      const auto count = psi_exact(query, table, s);
      out.config = {{"x", x}, {"y", y}, {"lower", lower}, {"strategy", strategy}};
      out.results = {{"psi", count}};
      out.table.columns = {"x", "y", "lower", "psi"};
      out.table.rows.push_back({x, y, lower, count});
      out.text = std::to_string(count) + "\n";
    } else if (command == "alpha") {
      if (y > x) throw DomainError("alpha: need y <= x");
      const PrimeTable table = table_for(y);
      const auto sp = solve_saddle(static_cast<double>(x), y, table, tol);
      out.config = {{"x", x}, {"y", y}, {"tol", tol}};
      const double u = std::log(static_cast<double>(x)) / std::log(static_cast<double>(y));
      const Json approx = y >= 3 ? Json(saddle_approx(static_cast<double>(x), static_cast<double>(y))) : Json(nullptr);
      out.results = {{"alpha", sp.alpha},       {"residual", sp.residual},
                     {"iterations", sp.iterations}, {"u", u},
                     {"approximation", approx}, {"variance_split", sp.variance_split()}};
      out.table.columns = {"x", "y", "u", "alpha", "residual", "iterations", "variance_split"};
      out.table.rows.push_back({x, y, u, sp.alpha, sp.residual, static_cast<std::int64_t>(sp.iterations),
                                sp.variance_split()});
      out.text = format_double(sp.alpha) + "\n";
    } else if (command == "rho") {
      out = single_value("rho", dickman_rho(u_value), {{"u", u_value}});
    } else if (command == "xi") {
      out = single_value("xi", xi(u_value), {{"u", u_value}});
    } else if (command == "zeta") {
      const PrimeTable table = table_for(y);
      const double lz = log_zeta_trunc(sigma, y, table);
      out = single_value(log_form ? "log_zeta" : "zeta", log_form ? lz : std::exp(lz),
                         {{"sigma", sigma}, {"y", y}, {"log", log_form}});
    } else if (command == "mc-sum") {
      const PrimeTable table = table_for(std::min(x, y));
      SumConstraint c;
      if (window != "none") {
        if (!(hi > lo && lo >= 1)) throw DomainError("--window needs 1 <= --lo < --hi");
        c = window == "largest" ? SumConstraint(LargestPrimeWindow{{lo, hi}}) : SumConstraint(AllPrimesWindow{{lo, hi}});
      }
      MomentEstimate m;
      if (mc_sum->count("--q") > 0) {
        if (window != "none") throw DomainError("--q cannot be combined with --window");
        m = estimate_power_moment(x, y, q, table, mc);
      } else {
        m = estimate_abs_moment(x, y, table, mc, c);
      }
      out = moment_output(m);
      out.config = {{"x", x}, {"y", y}, {"samples", samples}, {"seed", seed}, {"window", window}};
      if (window != "none") {
        out.config["lo"] = lo;
        out.config["hi"] = hi;
      }
      if (mc_sum->count("--q") > 0) out.config["q"] = q;
    } else if (command == "mc-ep") {
      const PrimeTable table = table_for(y);
      out = moment_output(estimate_ep_moment(beta, y, alpha, t, table, mc));
      out.config = {{"beta", beta}, {"y", y}, {"alpha", alpha}, {"t", t}, {"samples", samples}, {"seed", seed}};
    } else if (command == "mc-ep-integral") {
      const PrimeTable table = table_for(y);
      EulerIntegralSpec spec;
      spec.window = full_line ? full_line_window(beta, y, table) : IntegralWindow{t0, t1};
      spec.step = step;
      spec.weighted = weighted;
      out = moment_output(estimate_ep_integral_moment(beta, y, q, spec, table, mc));
      out.config = {{"beta", beta}, {"y", y}, {"q", q}, {"t0", spec.window.t0}, {"t1", spec.window.t1},
                    {"step", step}, {"weighted", weighted}, {"samples", samples}, {"seed", seed}};
    } else if (command == "plancherel") {
      std::vector<std::complex<double>> a;
      if (!coefficients.empty()) {
        if (plan->count("--x") > 0) throw DomainError("give either --coefficients or --x/--y, not both");
        for (const double c : coefficients) a.emplace_back(c, 0.0);
      } else {
        if (plan->count("--x") == 0 || plan->count("--y") == 0)
          throw DomainError("plancherel needs --coefficients or both --x and --y");
        const PrimeTable table = table_for(std::max<std::uint64_t>(2, x), x);
        for (std::uint64_t n = 1; n <= x; ++n) a.emplace_back(is_smooth(n, y, table) ? 1.0 : 0.0, 0.0);
      }
      const auto r = plancherel_check(a, sigma, t_max);
      out.config = {{"sigma", sigma}, {"T", t_max}, {"terms", a.size()}};
      if (coefficients.empty()) {
        out.config["x"] = x;
        out.config["y"] = y;
      }
      const bool within = r.gap <= r.tail_bound + 1e-6;
      out.results = {{"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"gap", r.gap},
                     {"tail_bound", r.tail_bound},
                     {"quadrature_error", r.quadrature_error},
                     {"within_bound", within}};
      out.table.columns = {"sigma", "T", "lhs", "rhs", "gap", "tail_bound", "quadrature_error"};
      out.table.rows.push_back({sigma, t_max, r.lhs, r.rhs, r.gap, r.tail_bound, r.quadrature_error});
      out.text = "lhs " + format_double(r.lhs) + "\nrhs " + format_double(r.rhs) + "\ngap " + format_double(r.gap) +
                 "\ntail_bound " + format_double(r.tail_bound) + "\n";
    } else if (command == "dirichlet-l1") {
      out = single_value("l1", dirichlet_l1(n_terms), {{"n", n_terms}});
    } else if (command == "report" || (command == "plot" && input.empty())) {
      if (us.empty() || x == 0) throw DomainError(command + " needs --x and --u");
      double u_min = *std::min_element(us.begin(), us.end());
      const auto y_max = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(x), 1.0 / u_min)));
      const PrimeTable table = table_for(std::min(x, y_max), x);
      const auto rows = cancellation_report(x, us, table, mc);
      out = report_output(rows, {{"x", x}, {"u", us}, {"samples", samples}, {"seed", seed}}, seed,
                          {{"x", x}, {"u", us}});
    } else if (command == "plot") {
      std::vector<ReportRow> rows;
      std::ifstream in(input, std::ios::binary);
      if (input.size() >= 5 && input.substr(input.size() - 5) == ".json") {
        rows = report_rows_from_json(Json::parse(in));
      } else {
        rows = report_rows_from_table(read_csv(in));
      }
      if (rows.empty()) throw DomainError("plot: the input holds no report rows");
      out = report_output(rows, {{"input", input}}, seed, Json::object());
    } else if (command == "check") {
      CheckOptions co;
      co.seed = check_seed;
      co.threads = g.threads;
      const auto results = run_checks(check_ids.empty() ? all_check_ids() : std::vector<int>(check_ids.begin(), check_ids.end()), co);
      bool ok = true;
      std::ostringstream t;
      for (const auto& r : results) {
        t << format_check_line(r) << "\n";
        ok = ok && r.passed;
      }
      t << (ok ? "all checks passed" : "some checks FAILED") << "\n";
      const Json doc = checks_document(results, co);
      out.config = doc["config"];
      out.results = doc["results"];
      out.grid = doc["provenance"]["grid"];
      out.seed = co.seed;
      out.text = t.str();
      out.table.columns = {"id", "name", "passed", "detail"};
      for (const auto& r : results)
        out.table.rows.push_back({static_cast<std::int64_t>(r.id), r.name, std::string(r.passed ? "PASS" : "FAIL"), r.detail});
      if (g.format != "text") std::cerr << t.str();
      emit(out, g, command);
      return ok ? 0 : kExitCheckFailed;
    }
    if (command == "plot" && g.format == "text") g.format = "svg";
    emit(out, g, command);
    return 0;
  } catch (const ResourceError& e) {
    std::cerr << json_error("resource", e.what()) << std::endl;
    return kExitResource;
  } catch (const std::bad_alloc&) {
    std::cerr << json_error("resource", "out of memory") << std::endl;
    return kExitResource;
  } catch (const Error& e) {
    std::cerr << json_error("validation", e.what()) << std::endl;
    return kExitInvalid;
  } catch (const Json::exception& e) {
    std::cerr << json_error("validation", e.what()) << std::endl;
    return kExitInvalid;
  }
}
