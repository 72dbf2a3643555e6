#ifndef RADSENS_MATRIXIO_HPP
#define RADSENS_MATRIXIO_HPP

#include "radsens/dataset.hpp"

#include <filesystem>

namespace radsens {

enum class Orientation { genes_as_rows, samples_as_rows };

Orientation parse_orientation(std::string_view name);

/**
 * Read a delimited expression table.
 * The delimiter is a tab if the header line contains one, otherwise a comma.
 * The first header cell must be blank or `id`; empty fields and `NA`/`NaN` (any case) are missing.
 * The result is always samples x genes.
 */
ExpressionMatrix read_expression_matrix(const std::filesystem::path& path, Orientation orientation);

/// Parse from an in-memory buffer; `source` is only used in error messages.
ExpressionMatrix parse_expression_matrix(std::string_view text, Orientation orientation, std::string_view source = "<memory>");

/// Write as TSV with full round-trip precision; missing cells are written as `NA`.
void write_expression_matrix(const ExpressionMatrix& matrix, const std::filesystem::path& path,
                             Orientation orientation = Orientation::samples_as_rows);

/// Two columns (sample_id, SF2); a header is detected by a non-numeric second field on the first line.
LabelTable read_labels(const std::filesystem::path& path);
LabelTable parse_labels(std::string_view text, std::string_view source = "<memory>");

void write_labels(const AlignedDataset& dataset, const std::filesystem::path& path);

/// Inner join on sample id; rows come out in lexicographic sample order.
AlignedDataset match_samples(const ExpressionMatrix& matrix, const LabelTable& labels, Omic provenance = Omic::transcriptome);

/// Read a gene list: first column of a delimited file, skipping a `gene_id`/`gene` header.
std::vector<std::string> read_gene_list(const std::filesystem::path& path);

} // namespace radsens

#endif
