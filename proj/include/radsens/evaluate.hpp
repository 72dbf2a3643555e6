#ifndef RADSENS_EVALUATE_HPP
#define RADSENS_EVALUATE_HPP

#include "radsens/dataset.hpp"
#include "radsens/report.hpp"
#include "radsens/selection.hpp"
#include "radsens/svr.hpp"

#include <cstdint>
#include <span>

namespace radsens {

struct Metrics {
    double r_squared = 0;
    double rmse = 0;
    Index n = 0;
};

Report to_report(const Metrics& metrics, std::string_view kind = "metrics");

/// 1 - SS_res / SS_tot. Held-out values can be negative.
double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);
double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);
Metrics compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

struct Interval {
    double low = 0;
    double high = 0;
};

/// Two-sided Student-t interval: mean +/- t(1 - (1 - level)/2, m - 1) * sd / sqrt(m).
Interval confidence_interval(std::span<const double> samples, double level = 0.95);

struct MetricSummary {
    double mean = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::vector<double> raw;

    static MetricSummary from(std::vector<double> raw);
};

struct CvOptions {
    int folds = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    std::vector<double> c_grid = default_c_grid();
    int inner_folds = 3;
    /// Base SVR settings; C is replaced by the grid search result.
    SvrConfig svr;
    /// Pick C once on the full dataset instead of inside every outer training fold.
    bool global_grid_search = false;
    /// Use the same outer folds as `select_features()` with the same seed.
    bool reuse_selection_folds = false;
    int jobs = 1;

    void validate() const;
};

struct CvReport {
    std::string dataset;
    Omic omic = Omic::transcriptome;
    std::vector<std::string> genes;
    int folds = 0;
    int repeats = 0;
    std::uint64_t seed = 0;
    MetricSummary r_squared;
    MetricSummary rmse;
    /// Per-gene SVR weight across iterations.
    std::vector<MetricSummary> weights;
    std::vector<double> chosen_C;
};

Report to_report(const CvReport& report);

/**
 * Outer repeated k-fold: for each iteration, grid-search C on the training part (inner folds),
 * train, and score the held-out fold. Aggregates into means and t-intervals.
 */
CvReport cross_validate(const AlignedDataset& ds, std::span<const std::string> genes, const CvOptions& opts = {});

struct SweepRow {
    int gene_count = 0;
    std::string dataset;
    MetricSummary r_squared;
    MetricSummary rmse;
};

struct SweepReport {
    std::vector<SweepRow> rows;
};

Report to_report(const SweepReport& report);

/// `cross_validate()` on the top-N ranked genes for N = 1..max_count.
SweepReport sweep_gene_count(const AlignedDataset& ds, const FeatureRanking& ranking, int max_count, const CvOptions& opts = {},
                             std::string_view dataset_name = {});

/// Grid-search and train on every source sample, then score every target sample.
Metrics cross_evaluate(const AlignedDataset& source, const AlignedDataset& target, std::span<const std::string> genes,
                       const CvOptions& opts = {});

} // namespace radsens

#endif
