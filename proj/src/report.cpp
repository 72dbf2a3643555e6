#include "radsens/report.hpp"
#include "radsens/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace radsens {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string render_cell(const CsvCell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return csv_escape(*s);
    }
    if (const auto* i = std::get_if<long long>(&cell)) {
        return std::to_string(*i);
    }
    return format_real(std::get<double>(cell));
}

/// Reals already stored via real_json() are left alone; raw doubles are rounded here too.
void normalize(nlohmann::json& node) {
    if (node.is_number_float()) {
        node = real_json(node.get<double>());
    } else if (node.is_structured()) {
        for (auto& child : node) {
            normalize(child);
        }
    }
}

} // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw ValidationError("unknown report format '" + std::string(name) + "'");
}

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "NA";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value == 0.0 ? 0.0 : value);
    return buffer;
}

nlohmann::json real_json(double value) {
    if (!std::isfinite(value)) {
        return nullptr;
    }
    return std::strtod(format_real(value).c_str(), nullptr);
}

std::string render_report(const Report& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        nlohmann::json body = report.body;
        normalize(body);
        nlohmann::json doc = {{"kind", report.kind}, {"report", std::move(body)}};
        return doc.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t i = 0; i < report.table.header.size(); ++i) {
        out += (i ? "," : "") + csv_escape(report.table.header[i]);
    }
    out += '\n';
    for (const auto& row : report.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + render_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format) {
    const auto text = render_report(report, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write report: " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("failed while writing report: " + path.string());
    }
}

} // namespace radsens
