#include "radsens/selection.hpp"
#include "radsens/error.hpp"
#include "radsens/parallel.hpp"
#include "radsens/rng.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace radsens {

void SelectionConfig::validate() const {
    if (folds < 2) {
        throw ValidationError("selection folds must be >= 2");
    }
    if (repeats < 1) {
        throw ValidationError("selection repeats must be >= 1");
    }
    if (support_k < 1) {
        throw ValidationError("support_k must be >= 1");
    }
    if (top_per_iter < 1 || top_per_iter > support_k) {
        throw ValidationError("top_per_iter must lie in [1, support_k]");
    }
    if (final_count < 1) {
        throw ValidationError("final_count must be >= 1");
    }
    if (jobs < 1) {
        throw ValidationError("jobs must be >= 1");
    }
    lasso.validate();
}

std::vector<FoldSplit> make_folds(Index n, int folds, int repeats, std::uint64_t seed) {
    if (folds < 2) {
        throw ValidationError("at least two folds are required");
    }
    if (n < folds) {
        throw ValidationError("cannot split " + std::to_string(n) + " samples into " + std::to_string(folds) + " folds");
    }
    std::vector<FoldSplit> splits;
    splits.reserve(static_cast<std::size_t>(folds * repeats));
    for (int rep = 0; rep < repeats; ++rep) {
        std::vector<Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        rng.shuffle(std::span<Index>(order));

        for (int f = 0; f < folds; ++f) {
            const auto begin = static_cast<std::size_t>(f * n / folds);
            const auto end = static_cast<std::size_t>((f + 1) * n / folds);
            FoldSplit split;
            split.repeat = rep;
            split.fold = f;
            split.validation.assign(order.begin() + begin, order.begin() + end);
            split.train.assign(order.begin(), order.begin() + begin);
            split.train.insert(split.train.end(), order.begin() + end, order.end());
            std::sort(split.validation.begin(), split.validation.end());
            std::sort(split.train.begin(), split.train.end());
            splits.push_back(std::move(split));
        }
    }
    return splits;
}

std::vector<std::string> FeatureRanking::gene_ids(std::size_t count) const {
    if (count > entries.size()) {
        throw ValidationError("ranking holds " + std::to_string(entries.size()) + " genes, " + std::to_string(count) + " requested");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(entries[i].gene_id);
    }
    return out;
}

namespace {

struct IterationResult {
    std::vector<std::pair<Index, double>> top; // (gene column, |coefficient|)
    IterationTrace trace;
};

bool ranks_before(const RankingEntry& a, const RankingEntry& b) {
    if (a.importance != b.importance) {
        return a.importance > b.importance;
    }
    if (a.mean_abs_coefficient != b.mean_abs_coefficient) {
        return a.mean_abs_coefficient > b.mean_abs_coefficient;
    }
    return a.gene_id < b.gene_id;
}

nlohmann::json entry_json(const RankingEntry& e, std::size_t rank) {
    return {{"rank", rank},
            {"gene_id", e.gene_id},
            {"importance", real_json(e.importance)},
            {"selection_count", e.selection_count},
            {"mean_abs_coefficient", real_json(e.mean_abs_coefficient)}};
}

} // namespace

FeatureRanking select_features(const AlignedDataset& ds, const SelectionConfig& cfg) {
    cfg.validate();
    ds.validate();
    if (ds.matrix.has_missing()) {
        throw ValidationError("feature selection requires a dataset without missing values");
    }
    const auto& X = ds.matrix.values;
    const auto& genes = ds.matrix.gene_ids;
    const auto splits = make_folds(X.rows(), cfg.folds, cfg.repeats, derive_seed(cfg.seed, streams::selection_folds));
    std::vector<IterationResult> results(splits.size());

    parallel_for(splits.size(), cfg.jobs, [&](std::size_t it) {
        const auto& split = splits[it];
        const Eigen::MatrixXd Xt = X(split.train, Eigen::all);
        const Eigen::VectorXd yt = ds.labels(split.train);
        LassoFit fit;
        try {
            fit = fit_with_support(Xt, yt, cfg.support_k, cfg.lasso);
        } catch (const Error& e) {
            throw ValidationError("selection iteration " + std::to_string(it) + ": " + e.what());
        }

        std::vector<Index> order = fit.support;
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            const double ca = std::abs(fit.coefficients[a]);
            const double cb = std::abs(fit.coefficients[b]);
            if (ca != cb) {
                return ca > cb;
            }
            return genes[a] < genes[b];
        });
        order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg.top_per_iter)));

        auto& result = results[it];
        for (Index g : order) {
            result.top.emplace_back(g, std::abs(fit.coefficients[g]));
        }
        result.trace.iteration = static_cast<int>(it);
        result.trace.lambda = fit.lambda;
        result.trace.truncated = fit.truncated;
        if (cfg.keep_traces) {
            result.trace.probes = fit.trace;
        }
    });

    std::vector<int> counts(genes.size(), 0);
    std::vector<double> coef_sums(genes.size(), 0.0);
    for (const auto& result : results) {
        for (const auto& [g, coef] : result.top) {
            ++counts[static_cast<std::size_t>(g)];
            coef_sums[static_cast<std::size_t>(g)] += coef;
        }
    }

    FeatureRanking ranking;
    ranking.iterations = static_cast<int>(splits.size());
    ranking.top_per_iter = cfg.top_per_iter;
    for (std::size_t g = 0; g < genes.size(); ++g) {
        if (counts[g] == 0) {
            continue;
        }
        ranking.all_genes.push_back({genes[g], static_cast<double>(counts[g]) / ranking.iterations, counts[g],
                                     coef_sums[g] / counts[g]});
    }
    std::sort(ranking.all_genes.begin(), ranking.all_genes.end(), ranks_before);
    const auto keep = std::min<std::size_t>(ranking.all_genes.size(), static_cast<std::size_t>(cfg.final_count));
    ranking.entries.assign(ranking.all_genes.begin(), ranking.all_genes.begin() + static_cast<std::ptrdiff_t>(keep));
    for (auto& result : results) {
        ranking.traces.push_back(std::move(result.trace));
    }
    return ranking;
}

Report to_report(const FeatureRanking& ranking) {
    Report report;
    report.kind = "feature_ranking";
    nlohmann::json entries = nlohmann::json::array();
    report.table.header = {"rank", "gene_id", "importance", "selection_count", "mean_abs_coefficient"};
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const auto& e = ranking.entries[i];
        entries.push_back(entry_json(e, i + 1));
        report.table.rows.push_back({static_cast<long long>(i + 1), e.gene_id, e.importance,
                                     static_cast<long long>(e.selection_count), e.mean_abs_coefficient});
    }
    nlohmann::json tallies = nlohmann::json::array();
    for (std::size_t i = 0; i < ranking.all_genes.size(); ++i) {
        tallies.push_back(entry_json(ranking.all_genes[i], i + 1));
    }
    std::size_t truncated = 0;
    for (const auto& trace : ranking.traces) {
        truncated += trace.truncated ? 1 : 0;
    }
    report.body = {{"entries", std::move(entries)},
                   {"all_genes", std::move(tallies)},
                   {"iterations", ranking.iterations},
                   {"top_per_iter", ranking.top_per_iter},
                   {"truncated_iterations", truncated}};
    return report;
}

Report lasso_trace_report(const FeatureRanking& ranking) {
    Report report;
    report.kind = "lasso_trace";
    report.table.header = {"iteration", "probe", "lambda", "support_size", "truncated"};
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& trace : ranking.traces) {
        nlohmann::json probes = nlohmann::json::array();
        for (std::size_t p = 0; p < trace.probes.size(); ++p) {
            probes.push_back({{"lambda", real_json(trace.probes[p].lambda)}, {"support_size", trace.probes[p].support_size}});
            report.table.rows.push_back({static_cast<long long>(trace.iteration), static_cast<long long>(p),
                                         trace.probes[p].lambda, static_cast<long long>(trace.probes[p].support_size),
                                         static_cast<long long>(trace.truncated)});
        }
        iterations.push_back({{"iteration", trace.iteration},
                              {"lambda", real_json(trace.lambda)},
                              {"truncated", trace.truncated},
                              {"probes", std::move(probes)}});
    }
    report.body = {{"iterations", std::move(iterations)}};
    return report;
}

std::vector<OverlapEntry> ranking_overlap(const FeatureRanking& a, const FeatureRanking& b) {
    std::unordered_map<std::string_view, std::size_t> rank_b;
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
        rank_b.emplace(b.entries[i].gene_id, i + 1);
    }
    std::vector<OverlapEntry> out;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto it = rank_b.find(a.entries[i].gene_id);
        if (it != rank_b.end()) {
            out.push_back({a.entries[i].gene_id, i + 1, it->second});
        }
    }
    return out;
}

Report to_report(const std::vector<OverlapEntry>& overlap) {
    Report report;
    report.kind = "ranking_overlap";
    report.table.header = {"gene_id", "rank_a", "rank_b"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : overlap) {
        rows.push_back({{"gene_id", e.gene_id}, {"rank_a", e.rank_a}, {"rank_b", e.rank_b}});
        report.table.rows.push_back({e.gene_id, static_cast<long long>(e.rank_a), static_cast<long long>(e.rank_b)});
    }
    report.body = {{"shared", std::move(rows)}};
    return report;
}

} // namespace radsens
