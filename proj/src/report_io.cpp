#include "smoothrmf/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "smoothrmf/errors.hpp"
#include "smoothrmf/version.hpp"

namespace smoothrmf {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record, reading further lines while inside quotes.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        field += '\n';
        if (!std::getline(in, line)) throw DomainError("csv: unterminated quoted field");
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw DomainError("csv: not a number: '" + s + "'");
  return v;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

void write_csv(std::ostream& out, const Table& table, const std::optional<std::string>& comment) {
  if (comment) out << "# " << *comment << "\r\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(format_cell(row[i]));
    out << "\r\n";
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::vector<std::string> fields;
  bool header = true;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!fields.empty() && !fields[0].empty() && fields[0][0] == '#') continue;
    if (header) {
      t.columns = fields;
      header = false;
      continue;
    }
    if (fields.size() != t.columns.size()) throw DomainError("csv: row width does not match the header");
    std::vector<Cell> row(fields.begin(), fields.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table report_table(const std::vector<ReportRow>& rows) {
  Table t;
  t.columns = {"x", "y", "u", "alpha", "psi", "abs_moment", "stderr", "ratio", "ci_low", "ci_high",
               "predicted_saving"};
  for (const auto& r : rows)
    t.rows.push_back({r.x, r.y, r.u, r.alpha, r.psi, r.abs_moment.mean, r.abs_moment.std_error, r.ratio, r.ci_low,
                      r.ci_high, r.predicted_saving});
  return t;
}

Json moment_json(const MomentEstimate& m) {
  Json params = Json::object();
  for (const auto& [k, v] : m.params) params[k] = finite_or_null(v);
  Json j = {{"statistic", m.statistic},     {"params", params},         {"mean", finite_or_null(m.mean)},
            {"stderr", finite_or_null(m.std_error)}, {"n_samples", m.n_samples}, {"seed", m.seed}};
  if (!m.warnings.empty()) j["warnings"] = m.warnings;
  return j;
}

Json report_json_rows(const std::vector<ReportRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j = {{"x", r.x},
              {"y", r.y},
              {"u", r.u},
              {"alpha", r.alpha},
              {"psi", r.psi},
              {"abs_moment", r.abs_moment.mean},
              {"stderr", r.abs_moment.std_error},
              {"n_samples", r.abs_moment.n_samples},
              {"ratio", r.ratio},
              {"ci_low", r.ci_low},
              {"ci_high", r.ci_high},
              {"predicted_saving", r.predicted_saving}};
    j["gmc_saving"] = r.gmc_saving ? Json(*r.gmc_saving) : Json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

Json make_document(Json config, Json results, std::uint64_t seed, Json grid) {
  return Json{{"config", std::move(config)},
              {"results", std::move(results)},
              {"provenance", {{"seed", seed}, {"version", kVersion}, {"grid", std::move(grid)}}}};
}

std::vector<ReportRow> report_rows_from_table(const Table& table) {
  auto col = [&](const std::string& name) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end()) throw DomainError("report: missing column '" + name + "'");
    return static_cast<std::size_t>(it - table.columns.begin());
  };
  const std::size_t cx = col("x"), cy = col("y"), cu = col("u"), ca = col("alpha"), cp = col("psi"),
                    cm = col("abs_moment"), cs = col("stderr"), cr = col("ratio"), cl = col("ci_low"),
                    ch = col("ci_high"), cv = col("predicted_saving");
  std::vector<ReportRow> rows;
  for (const auto& cells : table.rows) {
    auto num = [&](std::size_t i) { return parse_double(format_cell(cells[i])); };
    ReportRow r;
    r.x = static_cast<std::uint64_t>(num(cx));
    r.y = static_cast<std::uint64_t>(num(cy));
    r.u = num(cu);
    r.alpha = num(ca);
    r.psi = static_cast<std::uint64_t>(num(cp));
    r.abs_moment.mean = num(cm);
    r.abs_moment.std_error = num(cs);
    r.ratio = num(cr);
    r.ci_low = num(cl);
    r.ci_high = num(ch);
    r.predicted_saving = num(cv);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ReportRow> report_rows_from_json(const Json& doc) {
  const Json& results = doc.contains("results") ? doc.at("results") : doc;
  if (!results.is_array()) throw DomainError("report: JSON results must be an array of rows");
  std::vector<ReportRow> rows;
  for (const auto& j : results) {
    ReportRow r;
    r.x = j.at("x").get<std::uint64_t>();
    r.y = j.at("y").get<std::uint64_t>();
    r.u = j.at("u").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.psi = j.at("psi").get<std::uint64_t>();
    r.abs_moment.mean = j.at("abs_moment").get<double>();
    r.abs_moment.std_error = j.at("stderr").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").get<double>();
    r.predicted_saving = j.at("predicted_saving").get<double>();
    if (j.contains("gmc_saving") && j.at("gmc_saving").is_number()) r.gmc_saving = j.at("gmc_saving").get<double>();
    rows.push_back(r);
  }
  return rows;
}

std::string render_report_svg(const std::vector<ReportRow>& rows, const std::string& title) {
  if (rows.empty()) throw DomainError("plot: no report rows");
  constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 55;
  double u_min = rows.front().u, u_max = rows.front().u, r_max = 0.0;
  for (const auto& r : rows) {
    u_min = std::min(u_min, r.u);
    u_max = std::max(u_max, r.u);
    r_max = std::max({r_max, r.ci_high, r.predicted_saving, r.ratio});
  }
  if (u_max - u_min < 1e-9) {
    u_min -= 0.5;
    u_max += 0.5;
  }
  const double pad = 0.05 * (u_max - u_min);
  u_min -= pad;
  u_max += pad;
  r_max = r_max > 0.0 ? r_max * 1.1 : 1.0;
  auto px = [&](double u) { return kL + (u - u_min) / (u_max - u_min) * (kW - kL - kR); };
  auto py = [&](double v) { return kH - kB - v / r_max * (kH - kT - kB); };
  auto f = [](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, ptr);
  };
  auto escape = [](const std::string& s) {
    std::string out;
    for (const char c : s) {
      switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
      }
    }
    return out;
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
    << kW << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  // axes and ticks
  s << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\"" << kH - kB
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = r_max * k / 5.0;
    s << "<line x1=\"" << kL - 4 << "\" y1=\"" << f(py(v)) << "\" x2=\"" << kL << "\" y2=\"" << f(py(v))
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << kL - 8 << "\" y=\"" << f(py(v) + 4) << "\" text-anchor=\"end\">" << f(v) << "</text>\n";
  }
  for (const auto& r : rows) {
    s << "<line x1=\"" << f(px(r.u)) << "\" y1=\"" << kH - kB << "\" x2=\"" << f(px(r.u)) << "\" y2=\"" << kH - kB + 4
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << f(px(r.u)) << "\" y=\"" << kH - kB + 18 << "\" text-anchor=\"middle\">" << f(r.u)
      << "</text>\n";
  }
  s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">u = log x / log y</text>\n";
  s << "<text x=\"18\" y=\"" << (kT + kH - kB) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (kT + kH - kB) / 2 << ")\">E|S| / sqrt(Psi)</text>\n";

  // predicted saving curve, sampled densely
  s << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"6 4\" points=\"";
  for (int k = 0; k <= 100; ++k) {
    const double u = u_min + (u_max - u_min) * k / 100.0;
    s << (k ? " " : "") << f(px(u)) << ',' << f(py(std::exp(-u * std::numbers::ln2 / 2.0)));
  }
  s << "\"/>\n";
  // observed ratio with whiskers
  s << "<polyline fill=\"none\" stroke=\"#1f77b4\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) s << (i ? " " : "") << f(px(rows[i].u)) << ',' << f(py(rows[i].ratio));
  s << "\"/>\n";
  for (const auto& r : rows) {
    const double x = px(r.u);
    s << "<line x1=\"" << f(x) << "\" y1=\"" << f(py(r.ci_low)) << "\" x2=\"" << f(x) << "\" y2=\"" << f(py(r.ci_high))
      << "\" stroke=\"#1f77b4\"/>\n";
    for (const double v : {r.ci_low, r.ci_high})
      s << "<line x1=\"" << f(x - 4) << "\" y1=\"" << f(py(v)) << "\" x2=\"" << f(x + 4) << "\" y2=\"" << f(py(v))
        << "\" stroke=\"#1f77b4\"/>\n";
    s << "<circle cx=\"" << f(x) << "\" cy=\"" << f(py(r.ratio)) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  // legend
  const double lx = kW - kR - 200;
  s << "<line x1=\"" << lx << "\" y1=\"" << kT + 6 << "\" x2=\"" << lx + 24 << "\" y2=\"" << kT + 6
    << "\" stroke=\"#1f77b4\"/>\n";
  s << "<text x=\"" << lx + 30 << "\" y=\"" << kT + 10 << "\">observed ratio (3 se)</text>\n";
  s << "<line x1=\"" << lx << "\" y1=\"" << kT + 24 << "\" x2=\"" << lx + 24 << "\" y2=\"" << kT + 24
    << "\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>\n";
  s << "<text x=\"" << lx + 30 << "\" y=\"" << kT + 28 << "\">exp(-u log 2 / 2)</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace smoothrmf
