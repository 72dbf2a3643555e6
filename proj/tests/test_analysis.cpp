#include "radsens/analysis.hpp"
#include "radsens/error.hpp"
#include "radsens/rng.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace radsens;

namespace {

AlignedDataset dataset(const Eigen::MatrixXd& values, const Eigen::VectorXd& labels, const std::string& prefix = "s") {
    std::vector<std::string> samples, genes;
    for (Index i = 0; i < values.rows(); ++i) samples.push_back(prefix + std::to_string(100 + i));
    for (Index j = 0; j < values.cols(); ++j) genes.push_back("g" + std::to_string(j));
    return {ExpressionMatrix(samples, genes, values), labels, Omic::transcriptome};
}

Eigen::MatrixXd gaussian(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) m(i, j) = rng.normal();
    return m;
}

std::vector<std::string> genes(int k) {
    std::vector<std::string> out;
    for (int j = 0; j < k; ++j) out.push_back("g" + std::to_string(j));
    return out;
}

} // namespace

TEST(Pearson, HandValues) {
    EXPECT_NEAR(pearson(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(2, 4, 6)), 1.0, 1e-15);
    EXPECT_NEAR(pearson(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(3, 2, 1)), -1.0, 1e-15);
    // scipy.stats.pearsonr([1,2,3,4],[1,3,2,4]) = 0.8
    EXPECT_NEAR(pearson(Eigen::Vector4d(1, 2, 3, 4), Eigen::Vector4d(1, 3, 2, 4)), 0.8, 1e-15);
    EXPECT_THROW(pearson(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2)), ValidationError);
    EXPECT_THROW(pearson(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 2, 3)), ValidationError);
    EXPECT_THROW(pearson(Eigen::Vector3d(1, 2, 3), Eigen::Vector4d(1, 2, 3, 4)), ValidationError);
}

TEST(Pearson, AffineInvariantSymmetric) {
    const auto m = gaussian(20, 2, 1);
    const double r = pearson(m.col(0), m.col(1));
    EXPECT_NEAR(pearson(m.col(1), m.col(0)), r, 1e-15);
    const Eigen::VectorXd scaled = (m.col(0).array() * 4 - 7).matrix();
    EXPECT_NEAR(pearson(scaled, m.col(1)), r, 1e-13);
    EXPECT_NEAR(pearson(-scaled, m.col(1)), -r, 1e-13);
}

TEST(Concordance, SampleOrderIrrelevantAndMedian) {
    const auto x = gaussian(10, 3, 2);
    Eigen::MatrixXd y = x;
    y.col(1) = -x.col(1);
    y.col(2) = x.col(2) + gaussian(10, 1, 3);
    const auto t = dataset(x, Eigen::VectorXd::Constant(10, 0.5));
    auto p = dataset(y, Eigen::VectorXd::Constant(10, 0.5));
    std::vector<Index> rev(10);
    std::iota(rev.rbegin(), rev.rend(), Index{0});
    p.matrix = p.matrix.select_samples(rev);
    const auto report = rna_protein_concordance(t, p);
    ASSERT_EQ(report.records.size(), 3u);
    EXPECT_NEAR(report.records[0].r, 1.0, 1e-12);
    EXPECT_NEAR(report.records[1].r, -1.0, 1e-12);
    EXPECT_NEAR(report.median_r, report.records[2].r, 1e-15);
    const auto other = dataset(y.topRows(9), Eigen::VectorXd::Constant(9, 0.5));
    EXPECT_THROW(rna_protein_concordance(t, other), ValidationError);
}

TEST(GeneLabelCorrelations, NamesConstantGene) {
    Eigen::MatrixXd x = gaussian(8, 2, 4);
    Eigen::VectorXd y = 0.1 + 0.05 * x.col(0).array();
    const auto records = gene_label_correlations(dataset(x, y), genes(2));
    EXPECT_NEAR(records[0].r, 1.0, 1e-12);
    EXPECT_EQ(records[0].n, 8);
    x.col(1).setConstant(2);
    try {
        gene_label_correlations(dataset(x, y), genes(2));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("g1"), std::string::npos);
    }
}

TEST(Vif, TwoGenesClosedForm) {
    const auto x = gaussian(30, 2, 5);
    const double r = pearson(x.col(0), x.col(1));
    const auto out = vif(dataset(x, Eigen::VectorXd::Constant(30, 0.5)), genes(2));
    for (const auto& rec : out) EXPECT_NEAR(rec.vif, 1.0 / (1.0 - r * r), 1e-10);
}

TEST(Vif, OrthogonalIsOneCollinearIsInfinite) {
    Eigen::MatrixXd x(8, 3);
    x.col(0) << 1, -1, 1, -1, 1, -1, 1, -1;
    x.col(1) << 1, 1, -1, -1, 1, 1, -1, -1;
    x.col(2) << 1, 1, 1, 1, -1, -1, -1, -1;
    const auto ds = dataset(x, Eigen::VectorXd::Constant(8, 0.5));
    for (const auto& rec : vif(ds, genes(3))) EXPECT_NEAR(rec.vif, 1.0, 1e-12);
    Eigen::MatrixXd c(8, 3);
    c << x.col(0), x.col(1), x.col(0) - 2 * x.col(1);
    const auto out = vif(dataset(c, Eigen::VectorXd::Constant(8, 0.5)), genes(3));
    for (const auto& rec : out) {
        EXPECT_TRUE(rec.infinite);
        EXPECT_TRUE(std::isinf(rec.vif));
    }
    EXPECT_THROW(vif(ds, genes(1)), ValidationError);
}

TEST(Vif, InvariantToGeneScaling) {
    Eigen::MatrixXd x = gaussian(25, 4, 6);
    const auto a = vif(dataset(x, Eigen::VectorXd::Constant(25, 0.5)), genes(4));
    x.col(2) = x.col(2) * 9 + Eigen::VectorXd::Constant(25, 3);
    const auto b = vif(dataset(x, Eigen::VectorXd::Constant(25, 0.5)), genes(4));
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a[j].vif, b[j].vif, 1e-10);
}

TEST(Heatmap, SymmetricUnitDiagonalHistogram) {
    const auto x = gaussian(20, 6, 7);
    const auto stats = pairwise_heatmap_stats(dataset(x, Eigen::VectorXd::Constant(20, 0.5)), genes(6));
    EXPECT_TRUE(stats.r.isApprox(stats.r.transpose()));
    for (Index j = 0; j < 6; ++j) EXPECT_EQ(stats.r(j, j), 1.0);
    ASSERT_EQ(stats.histogram.size(), 20u);
    EXPECT_EQ(std::accumulate(stats.histogram.begin(), stats.histogram.end(), 0LL), 15);
    double mean = 0;
    for (Index a = 0; a < 6; ++a)
        for (Index b = a + 1; b < 6; ++b) mean += std::abs(stats.r(a, b));
    EXPECT_NEAR(stats.mean_abs_offdiag, mean / 15, 1e-14);
}

TEST(Substitutes, ThresholdsAndOrder) {
    const auto base = gaussian(40, 1, 8);
    Eigen::MatrixXd x(40, 4);
    x.col(0) = base;
    x.col(1) = base + 0.3 * gaussian(40, 1, 9);
    x.col(2) = base + 1.0 * gaussian(40, 1, 10);
    x.col(3) = gaussian(40, 1, 11);
    const Eigen::VectorXd y = (0.5 + 0.1 * base.array()).matrix();
    const std::vector<std::string> selected{"g0"};
    const auto table = substitution_candidates(dataset(x, y), selected, 0.4, 0.2);
    ASSERT_GE(table.rows.size(), 1u);
    EXPECT_EQ(table.rows[0].substitute, "g1");
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        EXPECT_GE(std::abs(table.rows[i - 1].r_to_gene), std::abs(table.rows[i].r_to_gene));
    for (const auto& row : table.rows) {
        EXPECT_NE(row.substitute, "g3");
        EXPECT_GE(std::abs(row.r_to_gene), 0.4);
        EXPECT_GE(std::abs(row.r_to_label), 0.2);
    }
}

TEST(Clonogenic, Arithmetic) {
    EXPECT_DOUBLE_EQ(plating_efficiency(80, 100), 0.8);
    EXPECT_DOUBLE_EQ(clonogenic_sf(40, 200, 0.8), 0.25);
    EXPECT_THROW(plating_efficiency(10, 0), ValidationError);
    EXPECT_THROW(clonogenic_sf(-1, 10, 0.5), ValidationError);
    EXPECT_THROW(clonogenic_sf(1, 10, 0), ValidationError);
}

TEST(LinearQuadratic, RecoversParameters) {
    const double alpha = 0.3, beta = 0.05;
    std::vector<double> doses{0, 1, 2, 4, 6, 8}, sf;
    for (double d : doses) sf.push_back(std::exp(-alpha * d - beta * d * d));
    const auto fit = lq_fit(doses, sf);
    EXPECT_NEAR(fit.alpha, alpha, 1e-12);
    EXPECT_NEAR(fit.beta, beta, 1e-12);
    EXPECT_NEAR(fit.sf2, std::exp(-0.8), 1e-12);
    EXPECT_NEAR(sf_at_dose(fit, 2.0), fit.sf2, 1e-15);
    EXPECT_LT(fit.residual_sse, 1e-20);
}

TEST(LinearQuadratic, Errors) {
    const std::vector<double> one{2}, sf1{0.5};
    EXPECT_THROW(lq_fit(one, sf1), ValidationError);
    const std::vector<double> d{1, 2}, bad{0.5, 0};
    EXPECT_THROW(lq_fit(d, bad), ValidationError);
    const std::vector<double> neg{-1, 2}, ok{0.9, 0.5};
    EXPECT_THROW(lq_fit(neg, ok), ValidationError);
}

TEST(RestrictSamples, OrderAndUnknown) {
    const auto ds = dataset(gaussian(4, 2, 12), Eigen::Vector4d(0.1, 0.2, 0.3, 0.4));
    const std::vector<std::string> want{"s103", "s100"};
    const auto r = restrict_samples(ds, want);
    EXPECT_EQ(r.matrix.sample_ids, want);
    EXPECT_EQ(r.labels[0], 0.4);
    const std::vector<std::string> bad{"zzz"};
    EXPECT_THROW(restrict_samples(ds, bad), ValidationError);
}
