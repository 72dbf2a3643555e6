#ifndef RADSENS_ANALYSIS_HPP
#define RADSENS_ANALYSIS_HPP

#include "radsens/dataset.hpp"
#include "radsens/report.hpp"

#include <span>

namespace radsens {

struct CorrelationRecord {
    std::string gene_id;
    double r = 0;
    Index n = 0;
};

/// Sample Pearson correlation. Throws for length mismatch, n < 3 or a constant input.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

struct ConcordanceReport {
    std::vector<CorrelationRecord> records;
    double median_r = 0;
};

Report to_report(const ConcordanceReport& report);

/**
 * Per-gene correlation between two omics over their shared samples.
 * Both datasets must carry the same gene list and the same sample set (in any order).
 */
ConcordanceReport rna_protein_concordance(const AlignedDataset& t, const AlignedDataset& p);

/// Restrict `ds` to the given samples, in the given order.
AlignedDataset restrict_samples(const AlignedDataset& ds, std::span<const std::string> samples);

std::vector<CorrelationRecord> gene_label_correlations(const AlignedDataset& ds, std::span<const std::string> genes);

Report to_report(const std::vector<CorrelationRecord>& records, std::string_view kind = "gene_label_correlations");

struct SubstitutionRow {
    std::string selected;
    std::string substitute;
    double r_to_gene = 0;
    double r_to_label = 0;
};

struct SubstitutionTable {
    std::vector<SubstitutionRow> rows;
};

Report to_report(const SubstitutionTable& table);

/**
 * Candidates for each selected gene: pool genes with |r(pool, selected)| >= r_gene and |r(pool, label)| >= r_label,
 * ordered by |r to gene| descending. An empty `pool` means every gene of `ds` outside the selected set.
 */
SubstitutionTable substitution_candidates(const AlignedDataset& ds, std::span<const std::string> selected, double r_gene = 0.4,
                                          double r_label = 0.2, std::span<const std::string> pool = {});

struct VifRecord {
    std::string gene_id;
    /// Infinite under perfect collinearity.
    double vif = 1;
    bool infinite = false;
};

Report to_report(const std::vector<VifRecord>& records);

/// VIF_j = 1 / (1 - R_j^2), R_j^2 from OLS (with intercept) of gene j on the other genes.
std::vector<VifRecord> vif(const AlignedDataset& ds, std::span<const std::string> genes);

struct HeatmapStats {
    std::vector<std::string> genes;
    Eigen::MatrixXd r;
    double mean_abs_offdiag = 0;
    double sd_abs_offdiag = 0;
    /// Counts of upper-triangle r values in 20 bins of width 0.1 over [-1, 1].
    std::vector<long long> histogram;
};

Report to_report(const HeatmapStats& stats);

HeatmapStats pairwise_heatmap_stats(const AlignedDataset& ds, std::span<const std::string> genes);

double plating_efficiency(double control_colonies, double control_plated);

/// colonies / (plated * pe).
double clonogenic_sf(double colonies, double plated, double pe);

struct LqFit {
    double alpha = 0;
    double beta = 0;
    double sf2 = 1;
    double residual_sse = 0;
};

Report to_report(const LqFit& fit);

/// Least squares of ln SF on [-d, -d^2] without intercept; zero-dose points are skipped.
LqFit lq_fit(std::span<const double> doses, std::span<const double> survivals);

/// exp(-(alpha d + beta d^2)).
double sf_at_dose(const LqFit& fit, double dose);

} // namespace radsens

#endif
