#include "radsens/evaluate.hpp"
#include "radsens/error.hpp"
#include "radsens/parallel.hpp"
#include "radsens/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

namespace radsens {

namespace {

void check_pair(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() != yhat.size()) {
        throw ValidationError("measured and predicted vectors differ in length");
    }
}

nlohmann::json summary_json(const MetricSummary& s) {
    nlohmann::json raw = nlohmann::json::array();
    for (double v : s.raw) {
        raw.push_back(real_json(v));
    }
    return {{"mean", real_json(s.mean)}, {"ci_low", real_json(s.ci_low)}, {"ci_high", real_json(s.ci_high)}, {"raw", std::move(raw)}};
}

std::uint64_t outer_fold_seed(const CvOptions& opts) {
    return derive_seed(opts.seed, opts.reuse_selection_folds ? streams::selection_folds : streams::evaluation_folds);
}

GridSearchResult search(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CvOptions& opts, std::uint64_t index) {
    return grid_search_C(X, y, opts.c_grid, opts.inner_folds, derive_seed(opts.seed, streams::grid_search, index), opts.svr);
}

} // namespace

double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    check_pair(y, yhat);
    if (y.size() < 2) {
        throw ValidationError("R^2 needs at least two samples");
    }
    const double ss_tot = (y.array() - y.mean()).square().sum();
    if (!(ss_tot > 0)) {
        throw ValidationError("R^2 is undefined for a constant measured vector");
    }
    const double ss_res = (y - yhat).squaredNorm();
    return 1.0 - ss_res / ss_tot;
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    check_pair(y, yhat);
    if (y.size() == 0) {
        throw ValidationError("RMSE of empty vectors is undefined");
    }
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

Metrics compute_metrics(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    return {r_squared(y, yhat), rmse(y, yhat), y.size()};
}

Report to_report(const Metrics& metrics, std::string_view kind) {
    Report report;
    report.kind = std::string(kind);
    report.body = {{"r_squared", real_json(metrics.r_squared)}, {"rmse", real_json(metrics.rmse)}, {"n", metrics.n}};
    report.table.header = {"r_squared", "rmse", "n"};
    report.table.rows.push_back({metrics.r_squared, metrics.rmse, static_cast<long long>(metrics.n)});
    return report;
}

Interval confidence_interval(std::span<const double> samples, double level) {
    if (samples.size() < 2) {
        throw ValidationError("a confidence interval needs at least two samples");
    }
    if (!(level > 0 && level < 1)) {
        throw ValidationError("confidence level must lie in (0, 1)");
    }
    const double m = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / m;
    double ss = 0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (m - 1));
    const boost::math::students_t dist(m - 1);
    const double t = boost::math::quantile(dist, 1.0 - (1.0 - level) / 2.0);
    const double half = t * sd / std::sqrt(m);
    return {mean - half, mean + half};
}

MetricSummary MetricSummary::from(std::vector<double> raw) {
    MetricSummary s;
    s.mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    if (raw.size() >= 2) {
        const auto ci = confidence_interval(raw);
        s.ci_low = std::min(ci.low, s.mean);
        s.ci_high = std::max(ci.high, s.mean);
    } else {
        s.ci_low = s.ci_high = s.mean;
    }
    s.raw = std::move(raw);
    return s;
}

void CvOptions::validate() const {
    if (folds < 2) {
        throw ValidationError("evaluation folds must be >= 2");
    }
    if (repeats < 1) {
        throw ValidationError("evaluation repeats must be >= 1");
    }
    if (inner_folds < 2) {
        throw ValidationError("grid-search folds must be >= 2");
    }
    if (c_grid.empty()) {
        throw ValidationError("the C grid is empty");
    }
    for (double c : c_grid) {
        if (!(c > 0) || !std::isfinite(c)) {
            throw ValidationError("every C in the grid must be finite and positive");
        }
    }
    if (jobs < 1) {
        throw ValidationError("jobs must be >= 1");
    }
    svr.validate();
}

CvReport cross_validate(const AlignedDataset& ds, std::span<const std::string> genes, const CvOptions& opts) {
    opts.validate();
    if (genes.empty()) {
        throw ValidationError("cross-validation needs at least one gene");
    }
    const Eigen::MatrixXd X = ds.features(genes);
    const Eigen::VectorXd& y = ds.labels;
    const auto splits = make_folds(X.rows(), opts.folds, opts.repeats, outer_fold_seed(opts));

    std::optional<double> global_C;
    if (opts.global_grid_search) {
        global_C = search(X, y, opts, splits.size()).best_C;
    }

    const auto count = splits.size();
    std::vector<double> r2(count), err(count), chosen(count);
    std::vector<Eigen::VectorXd> weights(count);
    parallel_for(count, opts.jobs, [&](std::size_t it) {
        const auto& split = splits[it];
        const Eigen::MatrixXd train_x = X(split.train, Eigen::all);
        const Eigen::VectorXd train_y = y(split.train);
        SvrConfig cfg = opts.svr;
        cfg.C = global_C ? *global_C : search(train_x, train_y, opts, it).best_C;
        const auto model = svr_train(train_x, train_y, cfg);
        const Eigen::VectorXd valid_y = y(split.validation);
        const Eigen::VectorXd pred = svr_predict(model, X(split.validation, Eigen::all));
        r2[it] = r_squared(valid_y, pred);
        err[it] = rmse(valid_y, pred);
        chosen[it] = cfg.C;
        weights[it] = model.weights;
    });

    CvReport report;
    report.dataset = std::string(to_string(ds.provenance));
    report.omic = ds.provenance;
    report.genes.assign(genes.begin(), genes.end());
    report.folds = opts.folds;
    report.repeats = opts.repeats;
    report.seed = opts.seed;
    report.r_squared = MetricSummary::from(std::move(r2));
    report.rmse = MetricSummary::from(std::move(err));
    report.chosen_C = std::move(chosen);
    for (std::size_t g = 0; g < genes.size(); ++g) {
        std::vector<double> column(count);
        for (std::size_t it = 0; it < count; ++it) {
            column[it] = weights[it][static_cast<Index>(g)];
        }
        report.weights.push_back(MetricSummary::from(std::move(column)));
    }
    return report;
}

Report to_report(const CvReport& cv) {
    Report report;
    report.kind = "cv_report";
    nlohmann::json weights = nlohmann::json::array();
    report.table.header = {"metric", "mean", "ci_low", "ci_high"};
    report.table.rows.push_back({std::string("r_squared"), cv.r_squared.mean, cv.r_squared.ci_low, cv.r_squared.ci_high});
    report.table.rows.push_back({std::string("rmse"), cv.rmse.mean, cv.rmse.ci_low, cv.rmse.ci_high});
    for (std::size_t g = 0; g < cv.genes.size(); ++g) {
        const auto& w = cv.weights[g];
        weights.push_back({{"gene_id", cv.genes[g]}, {"mean", real_json(w.mean)}, {"ci_low", real_json(w.ci_low)}, {"ci_high", real_json(w.ci_high)}});
        report.table.rows.push_back({"weight:" + cv.genes[g], w.mean, w.ci_low, w.ci_high});
    }
    nlohmann::json chosen = nlohmann::json::array();
    for (double c : cv.chosen_C) {
        chosen.push_back(real_json(c));
    }
    report.body = {{"config",
                    {{"folds", cv.folds},
                     {"repeats", cv.repeats},
                     {"gene_count", cv.genes.size()},
                     {"omic", std::string(to_string(cv.omic))},
                     {"seed", cv.seed}}},
                   {"dataset", cv.dataset},
                   {"genes", cv.genes},
                   {"r_squared", summary_json(cv.r_squared)},
                   {"rmse", summary_json(cv.rmse)},
                   {"svr_weights", std::move(weights)},
                   {"chosen_C", std::move(chosen)}};
    return report;
}

SweepReport sweep_gene_count(const AlignedDataset& ds, const FeatureRanking& ranking, int max_count, const CvOptions& opts,
                             std::string_view dataset_name) {
    if (max_count < 1) {
        throw ValidationError("max_count must be >= 1");
    }
    const auto genes = ranking.gene_ids(static_cast<std::size_t>(max_count));
    SweepReport sweep;
    for (int count = 1; count <= max_count; ++count) {
        const auto cv = cross_validate(ds, std::span(genes).first(static_cast<std::size_t>(count)), opts);
        sweep.rows.push_back({count, dataset_name.empty() ? cv.dataset : std::string(dataset_name), cv.r_squared, cv.rmse});
    }
    return sweep;
}

Report to_report(const SweepReport& sweep) {
    Report report;
    report.kind = "sweep_report";
    report.table.header = {"dataset", "gene_count", "r_squared_mean", "r_squared_ci_low", "r_squared_ci_high",
                           "rmse_mean", "rmse_ci_low", "rmse_ci_high"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : sweep.rows) {
        rows.push_back({{"dataset", row.dataset},
                        {"gene_count", row.gene_count},
                        {"r_squared", {{"mean", real_json(row.r_squared.mean)}, {"ci_low", real_json(row.r_squared.ci_low)}, {"ci_high", real_json(row.r_squared.ci_high)}}},
                        {"rmse", {{"mean", real_json(row.rmse.mean)}, {"ci_low", real_json(row.rmse.ci_low)}, {"ci_high", real_json(row.rmse.ci_high)}}}});
        report.table.rows.push_back({row.dataset, static_cast<long long>(row.gene_count), row.r_squared.mean, row.r_squared.ci_low,
                                     row.r_squared.ci_high, row.rmse.mean, row.rmse.ci_low, row.rmse.ci_high});
    }
    report.body = {{"rows", std::move(rows)}};
    return report;
}

Metrics cross_evaluate(const AlignedDataset& source, const AlignedDataset& target, std::span<const std::string> genes,
                       const CvOptions& opts) {
    opts.validate();
    const Eigen::MatrixXd source_x = source.features(genes);
    const Eigen::MatrixXd target_x = target.features(genes);
    SvrConfig cfg = opts.svr;
    cfg.C = search(source_x, source.labels, opts, 0).best_C;
    const auto model = svr_train(source_x, source.labels, cfg);
    return compute_metrics(target.labels, svr_predict(model, target_x));
}

} // namespace radsens
