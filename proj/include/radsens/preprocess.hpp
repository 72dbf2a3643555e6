#ifndef RADSENS_PREPROCESS_HPP
#define RADSENS_PREPROCESS_HPP

#include "radsens/dataset.hpp"
#include "radsens/report.hpp"

#include <utility>

namespace radsens {

struct PreprocessConfig {
    /// Genes with more than this many missing samples are dropped.
    int max_missing = 6;
    /// A gene is redundant if |r| reaches this against an earlier retained gene.
    double redundancy_threshold = 0.7;
    /// Sort genes lexicographically before the redundancy scan.
    bool sort_genes = false;

    void validate() const;
};

struct RedundantDrop {
    std::string dropped;
    std::string retained;
    double r = 0;
};

struct PreprocessLog {
    std::vector<std::string> dropped_missing;
    std::vector<RedundantDrop> dropped_redundant;
    std::vector<std::string> dropped_zero_variance;
    long long imputed_cells = 0;

    void append(const PreprocessLog& other);
};

Report to_report(const PreprocessLog& log);

std::pair<ExpressionMatrix, PreprocessLog> filter_missing(const ExpressionMatrix& m, int max_missing);

/// Replace each missing cell by its gene's mean over observed samples.
ExpressionMatrix impute_mean(const ExpressionMatrix& m);

/**
 * Greedy redundancy pruning in column order.
 * Each gene is compared against the genes retained so far and dropped at the first |Pearson r| >= threshold.
 * Zero-variance genes are dropped and logged separately.
 */
std::pair<ExpressionMatrix, PreprocessLog> prune_redundant(const ExpressionMatrix& m, double threshold);

/// Restrict both matrices to their shared genes, in lexicographic gene order.
std::pair<ExpressionMatrix, ExpressionMatrix> intersect_genes(const ExpressionMatrix& a, const ExpressionMatrix& b);

/// Standardize each gene to mean 0 and sample standard deviation 1.
ExpressionMatrix zscore(const ExpressionMatrix& m);

/// Row-stack two z-scored datasets sharing the same gene list.
AlignedDataset merge_omics(const AlignedDataset& a, const AlignedDataset& b);

/// filter_missing -> impute_mean -> (optional sort) -> prune_redundant.
std::pair<ExpressionMatrix, PreprocessLog> clean(const ExpressionMatrix& m, const PreprocessConfig& cfg);

/// Sorts genes lexicographically.
ExpressionMatrix sort_genes(const ExpressionMatrix& m);

} // namespace radsens

#endif
