#include "radsens/preprocess.hpp"
#include "radsens/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace radsens {

namespace {

constexpr double kZeroVariance = 1e-12;

/// Column centred and scaled to unit Euclidean norm, or empty if the column is constant.
std::optional<Eigen::VectorXd> unit_centered(const Eigen::Ref<const Eigen::VectorXd>& column) {
    Eigen::VectorXd centered = column.array() - column.mean();
    const double norm = centered.norm();
    if (!(norm > kZeroVariance * std::max(1.0, column.cwiseAbs().maxCoeff()) * std::sqrt(static_cast<double>(column.size())))) {
        return std::nullopt;
    }
    return centered / norm;
}

} // namespace

void PreprocessConfig::validate() const {
    if (max_missing < 0) {
        throw ValidationError("max_missing must be >= 0");
    }
    if (!(redundancy_threshold > 0.0 && redundancy_threshold <= 1.0)) {
        throw ValidationError("redundancy_threshold must lie in (0, 1]");
    }
}

void PreprocessLog::append(const PreprocessLog& other) {
    dropped_missing.insert(dropped_missing.end(), other.dropped_missing.begin(), other.dropped_missing.end());
    dropped_redundant.insert(dropped_redundant.end(), other.dropped_redundant.begin(), other.dropped_redundant.end());
    dropped_zero_variance.insert(dropped_zero_variance.end(), other.dropped_zero_variance.begin(), other.dropped_zero_variance.end());
    imputed_cells += other.imputed_cells;
}

Report to_report(const PreprocessLog& log) {
    Report report;
    report.kind = "preprocess_log";
    nlohmann::json redundant = nlohmann::json::array();
    report.table.header = {"gene_id", "stage", "retained_gene", "r"};
    for (const auto& gene : log.dropped_missing) {
        report.table.rows.push_back({gene, std::string("missing"), std::string(), std::numeric_limits<double>::quiet_NaN()});
    }
    for (const auto& gene : log.dropped_zero_variance) {
        report.table.rows.push_back({gene, std::string("zero_variance"), std::string(), std::numeric_limits<double>::quiet_NaN()});
    }
    for (const auto& drop : log.dropped_redundant) {
        redundant.push_back({{"dropped", drop.dropped}, {"retained", drop.retained}, {"r", real_json(drop.r)}});
        report.table.rows.push_back({drop.dropped, std::string("redundant"), drop.retained, drop.r});
    }
    report.body = {
        {"dropped_missing", log.dropped_missing},
        {"dropped_redundant", std::move(redundant)},
        {"dropped_zero_variance", log.dropped_zero_variance},
        {"imputed_cells", log.imputed_cells},
    };
    return report;
}

std::pair<ExpressionMatrix, PreprocessLog> filter_missing(const ExpressionMatrix& m, int max_missing) {
    PreprocessLog log;
    std::vector<Index> keep;
    for (Index g = 0; g < m.n_genes(); ++g) {
        const auto count = m.missing.size() ? m.missing.col(g).count() : 0;
        if (count > max_missing) {
            log.dropped_missing.push_back(m.gene_ids[g]);
        } else {
            keep.push_back(g);
        }
    }
    if (keep.empty()) {
        throw ValidationError("every gene exceeds " + std::to_string(max_missing) + " missing values");
    }
    return {m.select_genes(keep), std::move(log)};
}

ExpressionMatrix impute_mean(const ExpressionMatrix& m) {
    ExpressionMatrix out = m;
    for (Index g = 0; g < m.n_genes(); ++g) {
        double sum = 0;
        Index observed = 0;
        for (Index s = 0; s < m.n_samples(); ++s) {
            if (!m.missing(s, g)) {
                sum += m.values(s, g);
                ++observed;
            }
        }
        if (observed == 0) {
            throw ValidationError("gene '" + m.gene_ids[g] + "' has no observed values to impute from");
        }
        if (observed == m.n_samples()) {
            continue;
        }
        const double mean = sum / static_cast<double>(observed);
        for (Index s = 0; s < m.n_samples(); ++s) {
            if (m.missing(s, g)) {
                out.values(s, g) = mean;
            }
        }
    }
    out.missing.setConstant(false);
    return out;
}

std::pair<ExpressionMatrix, PreprocessLog> prune_redundant(const ExpressionMatrix& m, double threshold) {
    if (m.has_missing()) {
        throw ValidationError("redundancy pruning requires a matrix without missing values");
    }
    PreprocessLog log;
    const Index n = m.n_samples();
    // Unit-norm centred copies of retained genes; a dot product is then Pearson r.
    Eigen::MatrixXd retained(n, std::min<Index>(m.n_genes(), 256));
    Index n_retained = 0;
    std::vector<Index> keep;

    for (Index g = 0; g < m.n_genes(); ++g) {
        const auto unit = unit_centered(m.values.col(g));
        if (!unit) {
            log.dropped_zero_variance.push_back(m.gene_ids[g]);
            continue;
        }
        if (n_retained > 0) {
            const Eigen::VectorXd r = retained.leftCols(n_retained).transpose() * *unit;
            Index hit = -1;
            for (Index k = 0; k < n_retained; ++k) {
                if (std::abs(r[k]) >= threshold - 1e-12) {
                    hit = k;
                    break;
                }
            }
            if (hit >= 0) {
                log.dropped_redundant.push_back({m.gene_ids[g], m.gene_ids[keep[hit]], std::clamp(r[hit], -1.0, 1.0)});
                continue;
            }
        }
        if (n_retained == retained.cols()) {
            retained.conservativeResize(Eigen::NoChange, std::min<Index>(m.n_genes(), 2 * retained.cols()));
        }
        retained.col(n_retained++) = *unit;
        keep.push_back(g);
    }
    if (keep.empty()) {
        throw ValidationError("redundancy pruning removed every gene");
    }
    return {m.select_genes(keep), std::move(log)};
}

std::pair<ExpressionMatrix, ExpressionMatrix> intersect_genes(const ExpressionMatrix& a, const ExpressionMatrix& b) {
    const std::set<std::string_view> in_b(b.gene_ids.begin(), b.gene_ids.end());
    std::vector<std::string> shared;
    for (const auto& gene : a.gene_ids) {
        if (in_b.contains(gene)) {
            shared.push_back(gene);
        }
    }
    if (shared.empty()) {
        throw ValidationError("the two matrices share no gene identifiers");
    }
    std::sort(shared.begin(), shared.end());
    return {a.select_genes(a.gene_indices(shared)), b.select_genes(b.gene_indices(shared))};
}

ExpressionMatrix zscore(const ExpressionMatrix& m) {
    if (m.has_missing()) {
        throw ValidationError("z-scoring requires a matrix without missing values");
    }
    if (m.n_samples() < 2) {
        throw ValidationError("z-scoring requires at least two samples");
    }
    ExpressionMatrix out = m;
    const double denom = static_cast<double>(m.n_samples() - 1);
    for (Index g = 0; g < m.n_genes(); ++g) {
        auto column = out.values.col(g);
        column.array() -= column.mean();
        const double sd = std::sqrt(column.squaredNorm() / denom);
        if (!(sd > kZeroVariance * std::max(1.0, m.values.col(g).cwiseAbs().maxCoeff()))) {
            throw ValidationError("gene '" + m.gene_ids[g] + "' has zero variance and cannot be z-scored");
        }
        column /= sd;
    }
    return out;
}

AlignedDataset merge_omics(const AlignedDataset& a, const AlignedDataset& b) {
    if (a.matrix.gene_ids != b.matrix.gene_ids) {
        std::string detail;
        const auto n = std::min(a.matrix.gene_ids.size(), b.matrix.gene_ids.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.matrix.gene_ids[i] != b.matrix.gene_ids[i]) {
                detail = "position " + std::to_string(i) + ": '" + a.matrix.gene_ids[i] + "' vs '" + b.matrix.gene_ids[i] + "'";
                break;
            }
        }
        if (detail.empty()) {
            detail = "lengths " + std::to_string(a.matrix.gene_ids.size()) + " vs " + std::to_string(b.matrix.gene_ids.size());
        }
        throw ValidationError("cannot merge omics with different gene lists (" + detail + ")");
    }

    const std::string tag_a = std::string(to_string(a.provenance));
    std::string tag_b = std::string(to_string(b.provenance));
    if (tag_b == tag_a) {
        tag_b += "#2";
    }

    AlignedDataset out;
    out.provenance = Omic::combined;
    out.matrix.gene_ids = a.matrix.gene_ids;
    const Index na = a.matrix.n_samples();
    const Index nb = b.matrix.n_samples();
    out.matrix.values.resize(na + nb, a.matrix.n_genes());
    out.matrix.values.topRows(na) = a.matrix.values;
    out.matrix.values.bottomRows(nb) = b.matrix.values;
    out.matrix.missing.resize(na + nb, a.matrix.n_genes());
    out.matrix.missing.topRows(na) = a.matrix.missing;
    out.matrix.missing.bottomRows(nb) = b.matrix.missing;
    for (const auto& id : a.matrix.sample_ids) {
        out.matrix.sample_ids.push_back(id + "|" + tag_a);
    }
    for (const auto& id : b.matrix.sample_ids) {
        out.matrix.sample_ids.push_back(id + "|" + tag_b);
    }
    out.labels.resize(na + nb);
    out.labels << a.labels, b.labels;
    return out;
}

ExpressionMatrix sort_genes(const ExpressionMatrix& m) {
    std::vector<Index> order(m.gene_ids.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index x, Index y) { return m.gene_ids[x] < m.gene_ids[y]; });
    return m.select_genes(order);
}

std::pair<ExpressionMatrix, PreprocessLog> clean(const ExpressionMatrix& m, const PreprocessConfig& cfg) {
    cfg.validate();
    auto [filtered, log] = filter_missing(m, cfg.max_missing);
    log.imputed_cells = filtered.missing.count();
    auto imputed = impute_mean(filtered);
    if (cfg.sort_genes) {
        imputed = sort_genes(imputed);
    }
    auto [pruned, prune_log] = prune_redundant(imputed, cfg.redundancy_threshold);
    log.append(prune_log);
    return {std::move(pruned), std::move(log)};
}

} // namespace radsens
