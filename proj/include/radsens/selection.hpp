#ifndef RADSENS_SELECTION_HPP
#define RADSENS_SELECTION_HPP

#include "radsens/dataset.hpp"
#include "radsens/lasso.hpp"
#include "radsens/report.hpp"

#include <cstdint>

namespace radsens {

struct SelectionConfig {
    int folds = 5;
    int repeats = 10;
    /// Non-zero Lasso coefficients targeted in every iteration.
    int support_k = 30;
    /// Features counted per iteration, by |coefficient|.
    int top_per_iter = 20;
    int final_count = 20;
    std::uint64_t seed = 0;
    LassoConfig lasso;
    /// Worker threads for independent iterations.
    int jobs = 1;
    /// Keep the per-iteration lambda bisection traces in the ranking.
    bool keep_traces = false;

    void validate() const;
};

struct FoldSplit {
    int repeat = 0;
    int fold = 0;
    std::vector<Index> train;
    std::vector<Index> validation;
};

/**
 * Repeated k-fold partitions.
 * Each repeat shuffles 0..n-1 with an `Rng` seeded from (seed, repeat) and cuts it into `folds`
 * contiguous blocks whose sizes differ by at most one. Index lists are sorted.
 */
std::vector<FoldSplit> make_folds(Index n, int folds, int repeats, std::uint64_t seed);

struct RankingEntry {
    std::string gene_id;
    double importance = 0;
    int selection_count = 0;
    double mean_abs_coefficient = 0;
};

struct IterationTrace {
    int iteration = 0;
    double lambda = 0;
    bool truncated = false;
    std::vector<LambdaProbe> probes;
};

/**
 * @brief Frequency-based ranking of Lasso-selected genes.
 *
 * `entries` holds the top `final_count` genes; `all_genes` the full tally of every gene that was ever counted.
 * Both are ordered by importance, then mean |coefficient| (descending), then gene id.
 */
struct FeatureRanking {
    std::vector<RankingEntry> entries;
    std::vector<RankingEntry> all_genes;
    int iterations = 0;
    int top_per_iter = 0;
    std::vector<IterationTrace> traces;

    std::vector<std::string> gene_ids(std::size_t count) const;
};

Report to_report(const FeatureRanking& ranking);
Report lasso_trace_report(const FeatureRanking& ranking);

FeatureRanking select_features(const AlignedDataset& ds, const SelectionConfig& cfg);

struct OverlapEntry {
    std::string gene_id;
    /// 1-based ranks.
    std::size_t rank_a = 0;
    std::size_t rank_b = 0;
};

std::vector<OverlapEntry> ranking_overlap(const FeatureRanking& a, const FeatureRanking& b);

Report to_report(const std::vector<OverlapEntry>& overlap);

} // namespace radsens

#endif
