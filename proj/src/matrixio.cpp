#include "radsens/matrixio.hpp"
#include "radsens/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace radsens {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_missing_token(std::string_view field) {
    if (field.empty()) {
        return true;
    }
    const auto lower = lowercase(field);
    return lower == "na" || lower == "nan";
}

std::optional<double> parse_real(std::string_view field) {
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

/// Non-blank lines, with trailing CR stripped.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            pos = text.size();
        }
        auto line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!trim(line).empty()) {
            lines.push_back(line);
        }
        start = pos + 1;
    }
    return lines;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void check_unique(const std::vector<std::string>& ids, std::string_view what, std::string_view source) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw ParseError(std::string(source) + ": duplicate " + std::string(what) + " identifier '" + id + "'");
        }
    }
}

} // namespace

std::string_view to_string(Omic omic) {
    switch (omic) {
        case Omic::transcriptome: return "transcriptome";
        case Omic::proteome: return "proteome";
        case Omic::combined: return "combined";
    }
    return "unknown";
}

Omic parse_omic(std::string_view name) {
    if (name == "transcriptome") return Omic::transcriptome;
    if (name == "proteome") return Omic::proteome;
    if (name == "combined") return Omic::combined;
    throw ValidationError("unknown omic '" + std::string(name) + "'");
}

Orientation parse_orientation(std::string_view name) {
    if (name == "genes_as_rows") return Orientation::genes_as_rows;
    if (name == "samples_as_rows") return Orientation::samples_as_rows;
    throw ValidationError("unknown orientation '" + std::string(name) + "'");
}

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> samples, std::vector<std::string> genes, Eigen::MatrixXd vals)
    : sample_ids(std::move(samples)), gene_ids(std::move(genes)), values(std::move(vals)),
      missing(MaskMatrix::Constant(values.rows(), values.cols(), false)) {}

void ExpressionMatrix::validate() const {
    if (static_cast<Index>(sample_ids.size()) != values.rows() || static_cast<Index>(gene_ids.size()) != values.cols()) {
        throw ValidationError("expression matrix identifiers do not match its shape");
    }
    if (missing.rows() != values.rows() || missing.cols() != values.cols()) {
        throw ValidationError("missing mask does not match the expression matrix shape");
    }
    check_unique(sample_ids, "sample", "expression matrix");
    check_unique(gene_ids, "gene", "expression matrix");
    for (Index g = 0; g < values.cols(); ++g) {
        for (Index s = 0; s < values.rows(); ++s) {
            if (!missing(s, g) && !std::isfinite(values(s, g))) {
                throw ValidationError("non-finite value for sample '" + sample_ids[s] + "', gene '" + gene_ids[g] + "'");
            }
        }
    }
}

std::optional<Index> ExpressionMatrix::find_gene(std::string_view id) const {
    const auto it = std::find(gene_ids.begin(), gene_ids.end(), id);
    if (it == gene_ids.end()) {
        return std::nullopt;
    }
    return static_cast<Index>(it - gene_ids.begin());
}

std::optional<Index> ExpressionMatrix::find_sample(std::string_view id) const {
    const auto it = std::find(sample_ids.begin(), sample_ids.end(), id);
    if (it == sample_ids.end()) {
        return std::nullopt;
    }
    return static_cast<Index>(it - sample_ids.begin());
}

std::vector<Index> ExpressionMatrix::gene_indices(std::span<const std::string> genes) const {
    std::unordered_map<std::string_view, Index> lookup;
    lookup.reserve(gene_ids.size());
    for (std::size_t g = 0; g < gene_ids.size(); ++g) {
        lookup.emplace(gene_ids[g], static_cast<Index>(g));
    }
    std::vector<Index> out;
    out.reserve(genes.size());
    for (const auto& gene : genes) {
        const auto it = lookup.find(gene);
        if (it == lookup.end()) {
            throw ValidationError("gene '" + gene + "' is not present in the dataset");
        }
        out.push_back(it->second);
    }
    return out;
}

ExpressionMatrix ExpressionMatrix::select_genes(std::span<const Index> columns) const {
    ExpressionMatrix out;
    out.sample_ids = sample_ids;
    out.values.resize(values.rows(), static_cast<Index>(columns.size()));
    out.missing.resize(values.rows(), static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.gene_ids.push_back(gene_ids[columns[c]]);
        out.values.col(c) = values.col(columns[c]);
        out.missing.col(c) = missing.col(columns[c]);
    }
    return out;
}

ExpressionMatrix ExpressionMatrix::select_samples(std::span<const Index> rows) const {
    ExpressionMatrix out;
    out.gene_ids = gene_ids;
    out.values.resize(static_cast<Index>(rows.size()), values.cols());
    out.missing.resize(static_cast<Index>(rows.size()), values.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.sample_ids.push_back(sample_ids[rows[r]]);
        out.values.row(r) = values.row(rows[r]);
        out.missing.row(r) = missing.row(rows[r]);
    }
    return out;
}

void LabelTable::validate() const {
    for (const auto& [id, value] : entries) {
        if (!std::isfinite(value) || value <= 0.0 || value > 1.0) {
            throw ValidationError("SF2 for '" + id + "' must lie in (0, 1], got " + std::to_string(value));
        }
    }
}

void AlignedDataset::validate() const {
    matrix.validate();
    if (labels.size() != matrix.n_samples()) {
        throw ValidationError("label vector length does not match the number of samples");
    }
}

Eigen::MatrixXd AlignedDataset::features(std::span<const std::string> genes) const {
    const auto columns = matrix.gene_indices(genes);
    Eigen::MatrixXd out(matrix.n_samples(), static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.col(c) = matrix.values.col(columns[c]);
    }
    return out;
}

ExpressionMatrix parse_expression_matrix(std::string_view text, Orientation orientation, std::string_view source) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw ParseError(std::string(source) + ": empty expression file");
    }
    const char delim = lines.front().find('\t') != std::string_view::npos ? '\t' : ',';
    const auto header = split_fields(lines.front(), delim);
    if (!header.front().empty() && lowercase(header.front()) != "id") {
        throw ParseError(std::string(source) + ": first header cell must be blank or 'id', got '" + std::string(header.front()) + "'");
    }

    std::vector<std::string> column_ids(header.begin() + 1, header.end());
    std::vector<std::string> row_ids;
    const auto n_cols = static_cast<Index>(column_ids.size());
    const auto n_rows = static_cast<Index>(lines.size() - 1);
    Eigen::MatrixXd raw(n_rows, n_cols);
    MaskMatrix raw_missing(n_rows, n_cols);

    for (Index r = 0; r < n_rows; ++r) {
        const auto fields = split_fields(lines[r + 1], delim);
        if (static_cast<Index>(fields.size()) != n_cols + 1) {
            throw ParseError(std::string(source) + ": row " + std::to_string(r + 2) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(n_cols + 1));
        }
        row_ids.emplace_back(fields.front());
        for (Index c = 0; c < n_cols; ++c) {
            const auto field = fields[c + 1];
            if (is_missing_token(field)) {
                raw(r, c) = kNaN;
                raw_missing(r, c) = true;
                continue;
            }
            const auto value = parse_real(field);
            if (!value) {
                throw ParseError(std::string(source) + ": non-numeric value '" + std::string(field) + "' at row " +
                                 std::to_string(r + 2) + ", column " + std::to_string(c + 2));
            }
            raw(r, c) = *value;
            raw_missing(r, c) = false;
        }
    }

    const bool genes_rows = orientation == Orientation::genes_as_rows;
    check_unique(row_ids, genes_rows ? "gene" : "sample", source);
    check_unique(column_ids, genes_rows ? "sample" : "gene", source);

    ExpressionMatrix out;
    if (genes_rows) {
        out.sample_ids = std::move(column_ids);
        out.gene_ids = std::move(row_ids);
        out.values = raw.transpose();
        out.missing = raw_missing.transpose();
    } else {
        out.sample_ids = std::move(row_ids);
        out.gene_ids = std::move(column_ids);
        out.values = std::move(raw);
        out.missing = std::move(raw_missing);
    }
    return out;
}

ExpressionMatrix read_expression_matrix(const std::filesystem::path& path, Orientation orientation) {
    return parse_expression_matrix(slurp(path), orientation, path.string());
}

void write_expression_matrix(const ExpressionMatrix& matrix, const std::filesystem::path& path, Orientation orientation) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    const bool genes_rows = orientation == Orientation::genes_as_rows;
    const auto& row_ids = genes_rows ? matrix.gene_ids : matrix.sample_ids;
    const auto& col_ids = genes_rows ? matrix.sample_ids : matrix.gene_ids;

    out << "id";
    for (const auto& id : col_ids) {
        out << '\t' << id;
    }
    out << '\n';
    char buffer[64];
    for (std::size_t r = 0; r < row_ids.size(); ++r) {
        out << row_ids[r];
        for (std::size_t c = 0; c < col_ids.size(); ++c) {
            const auto s = static_cast<Index>(genes_rows ? c : r);
            const auto g = static_cast<Index>(genes_rows ? r : c);
            if (matrix.missing(s, g)) {
                out << "\tNA";
            } else {
                std::snprintf(buffer, sizeof(buffer), "%.17g", matrix.values(s, g));
                out << '\t' << buffer;
            }
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed while writing: " + path.string());
    }
}

LabelTable parse_labels(std::string_view text, std::string_view source) {
    const auto lines = split_lines(text);
    LabelTable table;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const char delim = lines[i].find('\t') != std::string_view::npos ? '\t' : ',';
        const auto fields = split_fields(lines[i], delim);
        if (fields.size() != 2) {
            throw ParseError(std::string(source) + ": line " + std::to_string(i + 1) + " must have exactly two fields");
        }
        const auto value = parse_real(fields[1]);
        if (!value) {
            if (i == 0) {
                continue; // header
            }
            throw ParseError(std::string(source) + ": non-numeric SF2 '" + std::string(fields[1]) + "' on line " + std::to_string(i + 1));
        }
        if (*value <= 0.0 || *value > 1.0) {
            throw ValidationError(std::string(source) + ": SF2 for '" + std::string(fields[0]) + "' must lie in (0, 1], got " +
                                  std::string(fields[1]));
        }
        if (!table.entries.emplace(std::string(fields[0]), *value).second) {
            throw ParseError(std::string(source) + ": duplicate sample identifier '" + std::string(fields[0]) + "'");
        }
    }
    return table;
}

LabelTable read_labels(const std::filesystem::path& path) {
    return parse_labels(slurp(path), path.string());
}

void write_labels(const AlignedDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << "sample_id\tSF2\n";
    char buffer[64];
    for (Index i = 0; i < dataset.labels.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", dataset.labels[i]);
        out << dataset.matrix.sample_ids[i] << '\t' << buffer << '\n';
    }
}

AlignedDataset match_samples(const ExpressionMatrix& matrix, const LabelTable& labels, Omic provenance) {
    std::vector<std::pair<std::string_view, Index>> shared;
    for (std::size_t s = 0; s < matrix.sample_ids.size(); ++s) {
        if (labels.entries.contains(matrix.sample_ids[s])) {
            shared.emplace_back(matrix.sample_ids[s], static_cast<Index>(s));
        }
    }
    if (shared.empty()) {
        throw ValidationError("no sample identifiers are shared between the expression matrix and the label table");
    }
    std::sort(shared.begin(), shared.end());

    std::vector<Index> rows;
    rows.reserve(shared.size());
    for (const auto& item : shared) {
        rows.push_back(item.second);
    }

    AlignedDataset out;
    out.matrix = matrix.select_samples(rows);
    out.labels.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.labels[static_cast<Index>(i)] = labels.entries.at(out.matrix.sample_ids[i]);
    }
    out.provenance = provenance;
    return out;
}

std::vector<std::string> read_gene_list(const std::filesystem::path& path) {
    const auto text = slurp(path);
    std::vector<std::string> genes;
    const auto lines = split_lines(text);
    // A ranking table carries the ids in its gene_id column; plain lists use the first column.
    std::size_t column = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const char delim = lines[i].find('\t') != std::string_view::npos ? '\t' : ',';
        const auto fields = split_fields(lines[i], delim);
        if (i == 0) {
            bool header = false;
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const auto lower = lowercase(fields[c]);
                if (lower == "gene_id" || lower == "gene" || (c == 0 && lower == "id")) {
                    column = c;
                    header = true;
                    break;
                }
            }
            if (header) {
                continue;
            }
        }
        if (column >= fields.size()) {
            throw ParseError(path.string() + ": line " + std::to_string(i + 1) + " has no gene column");
        }
        if (!fields[column].empty()) {
            genes.emplace_back(fields[column]);
        }
    }
    if (genes.empty()) {
        throw ValidationError(path.string() + ": gene list is empty");
    }
    return genes;
}

} // namespace radsens
