#ifndef RADSENS_DATASET_HPP
#define RADSENS_DATASET_HPP

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radsens {

using Index = Eigen::Index;
using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class Omic { transcriptome, proteome, combined };

std::string_view to_string(Omic omic);
Omic parse_omic(std::string_view name);

/**
 * @brief Samples x genes expression table.
 *
 * Missing cells hold NaN in `values` and `true` in `missing`.
 * Every other cell is finite.
 */
struct ExpressionMatrix {
    std::vector<std::string> sample_ids;
    std::vector<std::string> gene_ids;
    Eigen::MatrixXd values;
    MaskMatrix missing;

    ExpressionMatrix() = default;

    /// Fully observed matrix.
    ExpressionMatrix(std::vector<std::string> samples, std::vector<std::string> genes, Eigen::MatrixXd vals);

    Index n_samples() const { return values.rows(); }
    Index n_genes() const { return values.cols(); }

    bool has_missing() const { return missing.size() > 0 && missing.any(); }

    /// Throws `ValidationError` if shapes, identifiers or finiteness are inconsistent.
    void validate() const;

    std::optional<Index> find_gene(std::string_view id) const;
    std::optional<Index> find_sample(std::string_view id) const;

    /// Column index of every requested gene, throwing `ValidationError` naming the first absent one.
    std::vector<Index> gene_indices(std::span<const std::string> genes) const;

    ExpressionMatrix select_genes(std::span<const Index> columns) const;
    ExpressionMatrix select_samples(std::span<const Index> rows) const;
};

/// Cell-line identifier to SF2. All values lie in (0, 1].
struct LabelTable {
    std::map<std::string, double> entries;

    std::size_t size() const { return entries.size(); }
    void validate() const;
};

/// Expression matrix with its label vector aligned row for row.
struct AlignedDataset {
    ExpressionMatrix matrix;
    Eigen::VectorXd labels;
    Omic provenance = Omic::transcriptome;

    void validate() const;

    /// Dense feature block for the given genes, in the given order.
    Eigen::MatrixXd features(std::span<const std::string> genes) const;
};

} // namespace radsens

#endif
