#include "radsens/error.hpp"
#include "radsens/preprocess.hpp"
#include "radsens/rng.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace radsens;

namespace {

ExpressionMatrix random_matrix(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd v(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) v(i, j) = rng.normal();
    std::vector<std::string> samples, genes;
    for (Index i = 0; i < n; ++i) samples.push_back("s" + std::to_string(i));
    for (Index j = 0; j < p; ++j) genes.push_back("g" + std::to_string(j));
    return ExpressionMatrix(samples, genes, v);
}

void set_missing(ExpressionMatrix& m, Index i, Index j) {
    m.values(i, j) = std::numeric_limits<double>::quiet_NaN();
    m.missing(i, j) = true;
}

double abs_r(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd x = a.array() - a.mean();
    const Eigen::VectorXd y = b.array() - b.mean();
    return std::abs(x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm()));
}

} // namespace

TEST(FilterMissing, ThresholdIsInclusive) {
    auto m = random_matrix(10, 3, 1);
    for (Index i = 0; i < 6; ++i) set_missing(m, i, 0);
    for (Index i = 0; i < 7; ++i) set_missing(m, i, 1);
    const auto [kept, log] = filter_missing(m, 6);
    EXPECT_EQ(kept.gene_ids, (std::vector<std::string>{"g0", "g2"}));
    EXPECT_EQ(log.dropped_missing, (std::vector<std::string>{"g1"}));
}

TEST(FilterMissing, EverythingDroppedIsAnError) {
    auto m = random_matrix(3, 1, 1);
    set_missing(m, 0, 0);
    EXPECT_THROW(filter_missing(m, 0), ValidationError);
}

TEST(ImputeMean, FillsObservedMean) {
    ExpressionMatrix m({"a", "b", "c"}, {"g"}, Eigen::Vector3d(1, 0, 5));
    set_missing(m, 1, 0);
    const auto out = impute_mean(m);
    EXPECT_EQ(out.values(1, 0), 3.0);
    EXPECT_FALSE(out.has_missing());
    set_missing(m, 0, 0);
    set_missing(m, 2, 0);
    EXPECT_THROW(impute_mean(m), ValidationError);
}

TEST(PruneRedundant, DropsLaterGeneOfCorrelatedPair) {
    Eigen::MatrixXd v(6, 3);
    v.col(0) << 1, 2, 3, 4, 5, 6;
    v.col(1) << 1, 2, 3, 4, 6, 5;
    v.col(2) << 6, 1, 3, 4, 6, 1;
    ExpressionMatrix m({"a", "b", "c", "d", "e", "f"}, {"g0", "g1", "g2"}, v);
    ASSERT_GE(abs_r(v.col(0), v.col(1)), 0.7);
    const auto [kept, log] = prune_redundant(m, 0.7);
    ASSERT_EQ(log.dropped_redundant.size(), 1u);
    EXPECT_EQ(log.dropped_redundant[0].dropped, "g1");
    EXPECT_EQ(log.dropped_redundant[0].retained, "g0");
    EXPECT_EQ(kept.gene_ids, (std::vector<std::string>{"g0", "g2"}));
}

TEST(PruneRedundant, ZeroVarianceLoggedSeparately) {
    Eigen::MatrixXd v(4, 2);
    v << 1, 7, 2, 7, 3, 7, 5, 7;
    const auto [kept, log] = prune_redundant(ExpressionMatrix({"a", "b", "c", "d"}, {"x", "k"}, v), 0.7);
    EXPECT_EQ(kept.gene_ids, (std::vector<std::string>{"x"}));
    EXPECT_EQ(log.dropped_zero_variance, (std::vector<std::string>{"k"}));
}

TEST(PruneRedundant, InvariantAndIdempotent) {
    auto m = random_matrix(12, 60, 2);
    for (Index j = 1; j < 60; j += 3) m.values.col(j) = m.values.col(j - 1) + 0.3 * m.values.col(j + 1);
    const auto [kept, log] = prune_redundant(m, 0.7);
    for (Index a = 0; a < kept.n_genes(); ++a)
        for (Index b = a + 1; b < kept.n_genes(); ++b) EXPECT_LT(abs_r(kept.values.col(a), kept.values.col(b)), 0.7);
    EXPECT_EQ(kept.n_genes() + static_cast<Index>(log.dropped_redundant.size()), 60);
    const auto [again, log2] = prune_redundant(kept, 0.7);
    EXPECT_EQ(again.gene_ids, kept.gene_ids);
    EXPECT_TRUE(log2.dropped_redundant.empty());
}

TEST(PruneRedundant, SortGenesMakesOrderIrrelevant) {
    auto m = random_matrix(10, 20, 3);
    m.values.col(5) = m.values.col(2) * 2 + 0.1 * m.values.col(9);
    std::vector<Index> rev;
    for (Index j = 19; j >= 0; --j) rev.push_back(j);
    PreprocessConfig cfg;
    cfg.sort_genes = true;
    const auto a = clean(m, cfg).first;
    const auto b = clean(m.select_genes(rev), cfg).first;
    EXPECT_EQ(a.gene_ids, b.gene_ids);
    EXPECT_TRUE(a.values.isApprox(b.values));
}

TEST(Clean, IdempotentOnCleanOutput) {
    auto m = random_matrix(15, 40, 4);
    for (Index i = 0; i < 8; ++i) set_missing(m, i, 3);
    set_missing(m, 2, 7);
    m.values.col(11) = -m.values.col(10);
    const auto first = clean(m, {}).first;
    const auto second = clean(first, {});
    EXPECT_EQ(second.first.gene_ids, first.gene_ids);
    EXPECT_EQ(second.first.values, first.values);
    EXPECT_EQ(second.second.imputed_cells, 0);
    EXPECT_FALSE(first.find_gene("g3"));
    EXPECT_FALSE(first.find_gene("g11"));
}

TEST(ZScore, MeanZeroSdOne) {
    const auto z = zscore(random_matrix(9, 5, 5));
    for (Index j = 0; j < 5; ++j) {
        EXPECT_NEAR(z.values.col(j).mean(), 0.0, 1e-14);
        EXPECT_NEAR((z.values.col(j).array() - z.values.col(j).mean()).square().sum() / 8.0, 1.0, 1e-12);
    }
    ExpressionMatrix flat({"a", "b"}, {"g"}, Eigen::Vector2d(1, 1));
    EXPECT_THROW(zscore(flat), ValidationError);
}

TEST(ZScore, AffineInvariant) {
    const auto m = random_matrix(8, 4, 6);
    auto shifted = m;
    shifted.values = (m.values.array() * 3.5 + 10).matrix();
    EXPECT_TRUE(zscore(m).values.isApprox(zscore(shifted).values, 1e-12));
}

TEST(IntersectGenes, SharedSortedOrder) {
    ExpressionMatrix a({"s"}, {"z", "b", "a"}, Eigen::RowVector3d(1, 2, 3));
    ExpressionMatrix b({"s"}, {"a", "q", "z"}, Eigen::RowVector3d(4, 5, 6));
    const auto [x, y] = intersect_genes(a, b);
    EXPECT_EQ(x.gene_ids, (std::vector<std::string>{"a", "z"}));
    EXPECT_EQ(y.gene_ids, x.gene_ids);
    EXPECT_EQ(x.values(0, 0), 3.0);
    EXPECT_EQ(y.values(0, 1), 6.0);
    ExpressionMatrix c({"s"}, {"k"}, Eigen::MatrixXd::Ones(1, 1));
    EXPECT_THROW(intersect_genes(a, c), ValidationError);
}

TEST(MergeOmics, RowStacksAndKeepsLabels) {
    AlignedDataset t{ExpressionMatrix({"A", "B"}, {"g1", "g2"}, Eigen::Matrix2d::Identity()), Eigen::Vector2d(0.2, 0.4),
                     Omic::transcriptome};
    AlignedDataset p{ExpressionMatrix({"A"}, {"g1", "g2"}, Eigen::RowVector2d(5, 6)), Eigen::VectorXd::Constant(1, 0.2), Omic::proteome};
    const auto merged = merge_omics(t, p);
    EXPECT_EQ(merged.matrix.n_samples(), 3);
    EXPECT_EQ(merged.provenance, Omic::combined);
    EXPECT_EQ(merged.labels[2], 0.2);
    EXPECT_EQ(merged.matrix.values(2, 1), 6.0);
    std::set<std::string> ids(merged.matrix.sample_ids.begin(), merged.matrix.sample_ids.end());
    EXPECT_EQ(ids.size(), 3u);
    AlignedDataset other{ExpressionMatrix({"A"}, {"g1", "g3"}, Eigen::RowVector2d(5, 6)), Eigen::VectorXd::Constant(1, 0.2),
                         Omic::proteome};
    EXPECT_THROW(merge_omics(t, other), ValidationError);
}

TEST(PreprocessConfig, Validation) {
    PreprocessConfig cfg;
    cfg.max_missing = -1;
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg = {};
    cfg.redundancy_threshold = 0;
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg.redundancy_threshold = 1.0;
    EXPECT_NO_THROW(cfg.validate());
}
