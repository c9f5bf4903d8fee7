#pragma once

// Output formats: RFC 4180 CSV with round-trippable numbers, a single JSON
// object with config/results/provenance, and a self-contained SVG plot of the
// cancellation report.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "smoothrmf/moments.hpp"

namespace smoothrmf {

using Json = nlohmann::ordered_json;

/// 17 significant digits, "." separator,
/// independent of the global locale. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_cell(const Cell& c);

/// RFC 4180: CRLF line ends, fields quoted only when they contain a comma,
/// quote or line break. `comment` (if set) is written first, prefixed with "# ".
void write_csv(std::ostream& out, const Table& table, const std::optional<std::string>& comment = std::nullopt);

/// Parses what write_csv produces (comment lines skipped).
Table read_csv(std::istream& in);

Table report_table(const std::vector<ReportRow>& rows);
Json report_json_rows(const std::vector<ReportRow>& rows);
Json moment_json(const MomentEstimate& m);

/// {"config": ..., "results": ..., "provenance": {"seed", "version", "grid"}}.
Json make_document(Json config, Json results, std::uint64_t seed, Json grid);

/// Report rows read back from a CSV or JSON report.
std::vector<ReportRow> report_rows_from_table(const Table& table);
std::vector<ReportRow> report_rows_from_json(const Json& doc);

/// ratio against u with 3-sigma whiskers and the exp(-u log 2 / 2) curve.
std::string render_report_svg(const std::vector<ReportRow>& rows, const std::string& title);

}  // namespace smoothrmf
