#include "radsens/error.hpp"
#include "radsens/rng.hpp"
#include "radsens/synth.hpp"

#include <gtest/gtest.h>

using namespace radsens;

TEST(Rng, MatchesStandardEngine) {
    // mt19937_64 default-seed 10000th output is fixed by the standard.
    std::mt19937_64 ref;
    ref.discard(9999);
    EXPECT_EQ(ref(), 9981545732273789042ULL);
    Rng rng(5489);
    EXPECT_EQ(rng.next(), std::mt19937_64(5489)());
}

TEST(Rng, UniformAndBelowRanges) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(rng.below(7), 7u);
    }
}

TEST(Rng, NormalMoments) {
    Rng rng(2);
    double s = 0, s2 = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.05);
    EXPECT_NEAR(s2 / n, 1.0, 0.05);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng rng(3);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(std::span<int>(v));
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(DeriveSeed, StreamsAndIndicesSeparate) {
    EXPECT_NE(derive_seed(1, streams::synth), derive_seed(1, streams::grid_search));
    EXPECT_NE(derive_seed(1, streams::synth, 0), derive_seed(1, streams::synth, 1));
    EXPECT_EQ(derive_seed(9, streams::synth, 4), derive_seed(9, streams::synth, 4));
}

TEST(Generate, ShapesAndLabelRange) {
    const auto data = generate(synth_preset("concordance", 7));
    EXPECT_EQ(data.a.matrix.n_samples(), 73);
    EXPECT_EQ(data.b.matrix.n_samples(), 46);
    EXPECT_EQ(data.a.matrix.n_genes(), 500);
    EXPECT_EQ(data.truth.planted.size(), 10u);
    EXPECT_EQ(data.labels.size(), 73u);
    EXPECT_NEAR(data.a.labels.minCoeff(), 0.05, 1e-12);
    EXPECT_NEAR(data.a.labels.maxCoeff(), 0.95, 1e-12);
    for (Index i = 0; i < 46; ++i) EXPECT_EQ(data.b.matrix.sample_ids[static_cast<std::size_t>(i)], data.a.matrix.sample_ids[static_cast<std::size_t>(i)]);
    EXPECT_TRUE(data.a.matrix.has_missing());
    EXPECT_NO_THROW(data.labels.validate());
}

TEST(Generate, SeedDeterminism) {
    const auto a = generate(synth_preset("recovery", 3));
    const auto b = generate(synth_preset("recovery", 3));
    const auto c = generate(synth_preset("recovery", 4));
    EXPECT_EQ(a.a.matrix.values, b.a.matrix.values);
    EXPECT_EQ(a.truth.planted, b.truth.planted);
    EXPECT_NE(a.a.matrix.values, c.a.matrix.values);
}

TEST(Generate, NoiselessLabelsAreAffineInPlanted) {
    SynthConfig cfg;
    cfg.n_samples_a = 30;
    cfg.n_samples_b = 5;
    cfg.n_genes = 40;
    cfg.n_signal = 3;
    cfg.noise_sd = 0;
    cfg.seed = 8;
    const auto data = generate(cfg);
    Eigen::MatrixXd A(30, 4);
    A.col(0).setOnes();
    for (int j = 0; j < 3; ++j) A.col(j + 1) = data.a.matrix.values.col(data.truth.planted_indices[static_cast<std::size_t>(j)]);
    const Eigen::VectorXd fit = A * A.colPivHouseholderQr().solve(data.a.labels);
    EXPECT_LT((fit - data.a.labels).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generate, CrossOmicCorrelationNearRho) {
    SynthConfig cfg;
    cfg.n_samples_a = 400;
    cfg.n_samples_b = 400;
    cfg.n_genes = 20;
    cfg.cross_omic_rho = 0.6;
    cfg.seed = 1;
    const auto data = generate(cfg);
    double total = 0;
    for (Index g = 0; g < 20; ++g) {
        const Eigen::VectorXd x = data.a.matrix.values.col(g).array() - data.a.matrix.values.col(g).mean();
        const Eigen::VectorXd y = data.b.matrix.values.col(g).array() - data.b.matrix.values.col(g).mean();
        total += x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
    }
    EXPECT_NEAR(total / 20, 0.6, 0.05);
}

TEST(SynthConfig, Validation) {
    EXPECT_THROW(synth_preset("nope", 1), ValidationError);
    SynthConfig cfg;
    cfg.n_samples_b = cfg.n_samples_a + 1;
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg = {};
    cfg.cross_omic_rho = 1.5;
    EXPECT_THROW(cfg.validate(), ValidationError);
    cfg = {};
    cfg.missing_rate = 1;
    EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(OracleLasso, SingleColumnSoftThreshold) {
    Eigen::MatrixXd X(4, 1);
    X << 1, -1, 1, -1;
    const Eigen::VectorXd y = 3.0 * X.col(0);
    EXPECT_NEAR(oracle_lasso(X, y, 1.0)[0], 2.0, 1e-12);
    EXPECT_EQ(oracle_lasso(X, y, 5.0)[0], 0.0);
    EXPECT_THROW(oracle_lasso(Eigen::MatrixXd::Ones(3, 13), Eigen::VectorXd::Ones(3), 0.1), ValidationError);
}

TEST(OracleSvr, TwoPointClosedForm) {
    // Points x = -1, 1 with y = -1, 1: w = 1 - eps when C is large, b = 0.
    Eigen::MatrixXd X(2, 1);
    X << -1, 1;
    const Eigen::Vector2d y(-1, 1);
    const auto model = oracle_svr(X, y, 10.0, 0.2);
    EXPECT_NEAR(model.weights[0], 0.8, 1e-8);
    EXPECT_NEAR(model.bias, 0.0, 1e-8);
    const auto capped = oracle_svr(X, y, 0.1, 0.2);
    EXPECT_NEAR(capped.weights[0], 0.2, 1e-8);
}
