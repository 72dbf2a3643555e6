#ifndef RADSENS_REPORT_HPP
#define RADSENS_REPORT_HPP

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace radsens {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view name);

using CsvCell = std::variant<std::string, double, long long>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;
};

/**
 * @brief Serializable view of any analysis result.
 *
 * Each result type provides a `to_report()` overload filling both representations.
 * `write_report()` owns the formatting rules: keys sorted, reals at 6 significant digits,
 * non-finite reals as `null` (JSON) or `inf`/`-inf`/`NA` (CSV).
 */
struct Report {
    std::string kind;
    nlohmann::json body;
    CsvTable table;
};

std::string render_report(const Report& report, ReportFormat format);
void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format);

/// `%.6g` rendering used for every real in reports.
std::string format_real(double value);

/// Round to 6 significant digits; non-finite values become JSON null.
nlohmann::json real_json(double value);

} // namespace radsens

#endif
