#include "radsens/analysis.hpp"
#include "radsens/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace radsens {

namespace {

constexpr int kHistogramBins = 20;

double median(std::vector<double> values) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<Eigen::VectorXd> centered_unit(const Eigen::Ref<const Eigen::VectorXd>& x) {
    Eigen::VectorXd c = x.array() - x.mean();
    const double norm = c.norm();
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff()) * std::sqrt(static_cast<double>(x.size()));
    if (!(norm > 1e-12 * scale)) {
        return std::nullopt;
    }
    return c / norm;
}

std::vector<std::string> default_pool(const AlignedDataset& ds, std::span<const std::string> selected) {
    const std::set<std::string_view> chosen(selected.begin(), selected.end());
    std::vector<std::string> pool;
    for (const auto& gene : ds.matrix.gene_ids) {
        if (!chosen.contains(gene)) {
            pool.push_back(gene);
        }
    }
    return pool;
}

} // namespace

double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) {
        throw ValidationError("correlation inputs differ in length");
    }
    if (x.size() < 3) {
        throw ValidationError("correlation needs at least three observations");
    }
    const auto ux = centered_unit(x);
    const auto uy = centered_unit(y);
    if (!ux || !uy) {
        throw ValidationError("correlation is undefined for a constant vector");
    }
    return std::clamp(ux->dot(*uy), -1.0, 1.0);
}

AlignedDataset restrict_samples(const AlignedDataset& ds, std::span<const std::string> samples) {
    std::vector<Index> rows;
    for (const auto& id : samples) {
        const auto row = ds.matrix.find_sample(id);
        if (!row) {
            throw ValidationError("sample '" + id + "' is not present in the dataset");
        }
        rows.push_back(*row);
    }
    AlignedDataset out;
    out.matrix = ds.matrix.select_samples(rows);
    out.labels = ds.labels(rows);
    out.provenance = ds.provenance;
    return out;
}

ConcordanceReport rna_protein_concordance(const AlignedDataset& t, const AlignedDataset& p) {
    if (t.matrix.gene_ids != p.matrix.gene_ids) {
        throw ValidationError("concordance requires identical gene lists in both omics");
    }
    const std::set<std::string> ts(t.matrix.sample_ids.begin(), t.matrix.sample_ids.end());
    const std::set<std::string> ps(p.matrix.sample_ids.begin(), p.matrix.sample_ids.end());
    if (ts != ps) {
        throw ValidationError("concordance requires the same sample set in both omics");
    }
    const auto aligned = restrict_samples(p, t.matrix.sample_ids);

    ConcordanceReport report;
    std::vector<double> rs;
    for (Index g = 0; g < t.matrix.n_genes(); ++g) {
        const double r = pearson(t.matrix.values.col(g), aligned.matrix.values.col(g));
        report.records.push_back({t.matrix.gene_ids[g], r, t.matrix.n_samples()});
        rs.push_back(r);
    }
    report.median_r = median(std::move(rs));
    return report;
}

Report to_report(const ConcordanceReport& concordance) {
    Report report = to_report(concordance.records, "concordance");
    report.body["median_r"] = real_json(concordance.median_r);
    return report;
}

std::vector<CorrelationRecord> gene_label_correlations(const AlignedDataset& ds, std::span<const std::string> genes) {
    std::vector<CorrelationRecord> out;
    const auto columns = ds.matrix.gene_indices(genes);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        try {
            out.push_back({genes[i], pearson(ds.matrix.values.col(columns[i]), ds.labels), ds.matrix.n_samples()});
        } catch (const ValidationError& e) {
            throw ValidationError("gene '" + genes[i] + "': " + e.what());
        }
    }
    return out;
}

Report to_report(const std::vector<CorrelationRecord>& records, std::string_view kind) {
    Report report;
    report.kind = std::string(kind);
    report.table.header = {"gene_id", "r", "n"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : records) {
        rows.push_back({{"gene_id", rec.gene_id}, {"r", real_json(rec.r)}, {"n", rec.n}});
        report.table.rows.push_back({rec.gene_id, rec.r, static_cast<long long>(rec.n)});
    }
    report.body = {{"records", std::move(rows)}};
    return report;
}

SubstitutionTable substitution_candidates(const AlignedDataset& ds, std::span<const std::string> selected, double r_gene,
                                          double r_label, std::span<const std::string> pool) {
    std::vector<std::string> pool_ids = pool.empty() ? default_pool(ds, selected) : std::vector<std::string>(pool.begin(), pool.end());
    const auto pool_cols = ds.matrix.gene_indices(pool_ids);
    const auto selected_cols = ds.matrix.gene_indices(selected);
    const auto label_unit = centered_unit(ds.labels);
    if (!label_unit) {
        throw ValidationError("substitution search needs a non-constant label vector");
    }

    // Unit vectors for the pool; constant genes cannot correlate and are skipped.
    struct Candidate {
        std::size_t pool_index;
        Eigen::VectorXd unit;
        double r_label;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < pool_cols.size(); ++i) {
        auto unit = centered_unit(ds.matrix.values.col(pool_cols[i]));
        if (!unit) {
            continue;
        }
        const double rl = std::clamp(unit->dot(*label_unit), -1.0, 1.0);
        if (std::abs(rl) >= r_label) {
            candidates.push_back({i, std::move(*unit), rl});
        }
    }

    SubstitutionTable table;
    for (std::size_t s = 0; s < selected_cols.size(); ++s) {
        const auto sel_unit = centered_unit(ds.matrix.values.col(selected_cols[s]));
        if (!sel_unit) {
            continue;
        }
        std::vector<SubstitutionRow> rows;
        for (const auto& cand : candidates) {
            const double rg = std::clamp(cand.unit.dot(*sel_unit), -1.0, 1.0);
            if (std::abs(rg) >= r_gene) {
                rows.push_back({selected[s], pool_ids[cand.pool_index], rg, cand.r_label});
            }
        }
        std::sort(rows.begin(), rows.end(), [](const SubstitutionRow& a, const SubstitutionRow& b) {
            if (std::abs(a.r_to_gene) != std::abs(b.r_to_gene)) {
                return std::abs(a.r_to_gene) > std::abs(b.r_to_gene);
            }
            return a.substitute < b.substitute;
        });
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
    return table;
}

Report to_report(const SubstitutionTable& table) {
    Report report;
    report.kind = "substitution_candidates";
    report.table.header = {"selected", "substitute", "r_to_gene", "r_to_label"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"selected", row.selected},
                        {"substitute", row.substitute},
                        {"r_to_gene", real_json(row.r_to_gene)},
                        {"r_to_label", real_json(row.r_to_label)}});
        report.table.rows.push_back({row.selected, row.substitute, row.r_to_gene, row.r_to_label});
    }
    report.body = {{"rows", std::move(rows)}};
    return report;
}

std::vector<VifRecord> vif(const AlignedDataset& ds, std::span<const std::string> genes) {
    const Index k = static_cast<Index>(genes.size());
    if (k < 2) {
        throw ValidationError("VIF needs at least two genes");
    }
    const Eigen::MatrixXd X = ds.features(genes);
    const Index n = X.rows();
    if (n <= k) {
        throw ValidationError("VIF needs more samples (" + std::to_string(n) + ") than genes (" + std::to_string(k) + ")");
    }

    std::vector<VifRecord> out;
    for (Index j = 0; j < k; ++j) {
        Eigen::MatrixXd design(n, k);
        design.col(0).setOnes();
        for (Index c = 0, dst = 1; c < k; ++c) {
            if (c != j) {
                design.col(dst++) = X.col(c);
            }
        }
        const Eigen::VectorXd target = X.col(j);
        const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
        const double ss_res = (target - design * coef).squaredNorm();
        const double ss_tot = (target.array() - target.mean()).square().sum();
        if (!(ss_tot > 0)) {
            throw ValidationError("gene '" + genes[static_cast<std::size_t>(j)] + "' is constant; VIF is undefined");
        }
        VifRecord rec{genes[static_cast<std::size_t>(j)], ss_tot / ss_res, false};
        if (ss_res <= 1e-10 * ss_tot) {
            rec.vif = std::numeric_limits<double>::infinity();
            rec.infinite = true;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

Report to_report(const std::vector<VifRecord>& records) {
    Report report;
    report.kind = "vif";
    report.table.header = {"gene_id", "vif", "infinite"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : records) {
        rows.push_back({{"gene_id", rec.gene_id}, {"vif", real_json(rec.vif)}, {"infinite", rec.infinite}});
        report.table.rows.push_back({rec.gene_id, rec.vif, static_cast<long long>(rec.infinite)});
    }
    report.body = {{"records", std::move(rows)}};
    return report;
}

HeatmapStats pairwise_heatmap_stats(const AlignedDataset& ds, std::span<const std::string> genes) {
    const Index k = static_cast<Index>(genes.size());
    if (k < 2) {
        throw ValidationError("a correlation heatmap needs at least two genes");
    }
    const Eigen::MatrixXd X = ds.features(genes);
    Eigen::MatrixXd units(X.rows(), k);
    for (Index j = 0; j < k; ++j) {
        const auto unit = centered_unit(X.col(j));
        if (!unit) {
            throw ValidationError("gene '" + genes[static_cast<std::size_t>(j)] + "' is constant; correlation is undefined");
        }
        units.col(j) = *unit;
    }

    HeatmapStats stats;
    stats.genes.assign(genes.begin(), genes.end());
    stats.r = units.transpose() * units;
    stats.histogram.assign(kHistogramBins, 0);
    std::vector<double> abs_values;
    for (Index a = 0; a < k; ++a) {
        stats.r(a, a) = 1.0;
        for (Index b = a + 1; b < k; ++b) {
            const double r = std::clamp(stats.r(a, b), -1.0, 1.0);
            stats.r(a, b) = stats.r(b, a) = r;
            abs_values.push_back(std::abs(r));
            const auto bin = std::clamp(static_cast<int>(std::floor((r + 1.0) * 10.0)), 0, kHistogramBins - 1);
            ++stats.histogram[static_cast<std::size_t>(bin)];
        }
    }
    const double m = static_cast<double>(abs_values.size());
    double sum = 0;
    for (double v : abs_values) {
        sum += v;
    }
    stats.mean_abs_offdiag = sum / m;
    double ss = 0;
    for (double v : abs_values) {
        ss += (v - stats.mean_abs_offdiag) * (v - stats.mean_abs_offdiag);
    }
    stats.sd_abs_offdiag = abs_values.size() > 1 ? std::sqrt(ss / (m - 1)) : 0.0;
    return stats;
}

Report to_report(const HeatmapStats& stats) {
    Report report;
    report.kind = "heatmap";
    report.table.header.push_back("gene_id");
    report.table.header.insert(report.table.header.end(), stats.genes.begin(), stats.genes.end());
    nlohmann::json matrix = nlohmann::json::array();
    for (Index a = 0; a < stats.r.rows(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        std::vector<CsvCell> cells{stats.genes[static_cast<std::size_t>(a)]};
        for (Index b = 0; b < stats.r.cols(); ++b) {
            row.push_back(real_json(stats.r(a, b)));
            cells.emplace_back(stats.r(a, b));
        }
        matrix.push_back(std::move(row));
        report.table.rows.push_back(std::move(cells));
    }
    nlohmann::json bins = nlohmann::json::array();
    for (int b = 0; b < kHistogramBins; ++b) {
        bins.push_back({{"low", real_json(-1.0 + 0.1 * b)}, {"high", real_json(-1.0 + 0.1 * (b + 1))}, {"count", stats.histogram[b]}});
    }
    report.body = {{"genes", stats.genes},
                   {"r", std::move(matrix)},
                   {"mean_abs_offdiag", real_json(stats.mean_abs_offdiag)},
                   {"sd_abs_offdiag", real_json(stats.sd_abs_offdiag)},
                   {"histogram", std::move(bins)}};
    return report;
}

double plating_efficiency(double control_colonies, double control_plated) {
    if (!(control_plated > 0)) {
        throw ValidationError("control cells plated must be > 0");
    }
    if (control_colonies < 0) {
        throw ValidationError("colony counts cannot be negative");
    }
    return control_colonies / control_plated;
}

double clonogenic_sf(double colonies, double plated, double pe) {
    if (!(plated > 0)) {
        throw ValidationError("cells plated must be > 0");
    }
    if (!(pe > 0)) {
        throw ValidationError("plating efficiency must be > 0");
    }
    if (colonies < 0) {
        throw ValidationError("colony counts cannot be negative");
    }
    return colonies / (plated * pe);
}

LqFit lq_fit(std::span<const double> doses, std::span<const double> survivals) {
    if (doses.size() != survivals.size()) {
        throw ValidationError("dose and survival lists differ in length");
    }
    std::vector<std::pair<double, double>> rows;
    std::set<double> distinct;
    for (std::size_t i = 0; i < doses.size(); ++i) {
        if (!std::isfinite(doses[i]) || doses[i] < 0) {
            throw ValidationError("doses must be finite and non-negative");
        }
        if (!std::isfinite(survivals[i]) || survivals[i] <= 0) {
            throw ValidationError("surviving fractions must be positive; the log is undefined otherwise");
        }
        if (doses[i] > 0) {
            rows.emplace_back(doses[i], survivals[i]);
            distinct.insert(doses[i]);
        }
    }
    if (distinct.size() < 2) {
        throw ValidationError("the linear-quadratic fit needs at least two distinct positive doses");
    }

    Eigen::MatrixXd design(static_cast<Index>(rows.size()), 2);
    Eigen::VectorXd target(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [d, sf] = rows[i];
        design(static_cast<Index>(i), 0) = -d;
        design(static_cast<Index>(i), 1) = -d * d;
        target[static_cast<Index>(i)] = std::log(sf);
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);

    LqFit fit;
    fit.alpha = coef[0];
    fit.beta = coef[1];
    fit.residual_sse = (target - design * coef).squaredNorm();
    fit.sf2 = std::exp(-(2.0 * fit.alpha + 4.0 * fit.beta));
    return fit;
}

double sf_at_dose(const LqFit& fit, double dose) {
    return std::exp(-(fit.alpha * dose + fit.beta * dose * dose));
}

Report to_report(const LqFit& fit) {
    Report report;
    report.kind = "lq_fit";
    report.body = {{"alpha", real_json(fit.alpha)}, {"beta", real_json(fit.beta)}, {"sf2", real_json(fit.sf2)}, {"residual_sse", real_json(fit.residual_sse)}};
    report.table.header = {"alpha", "beta", "sf2", "residual_sse"};
    report.table.rows.push_back({fit.alpha, fit.beta, fit.sf2, fit.residual_sse});
    return report;
}

} // namespace radsens
