#include "radsens/error.hpp"
#include "radsens/rng.hpp"
#include "radsens/svr.hpp"
#include "radsens/synth.hpp"

#include <gtest/gtest.h>

using namespace radsens;

namespace {

struct Problem {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Problem random_problem(Index n, Index d, std::uint64_t seed, double noise = 0.3) {
    Rng rng(seed);
    Problem p{Eigen::MatrixXd(n, d), Eigen::VectorXd(n)};
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) p.X(i, j) = rng.normal();
        p.y[i] = p.X.row(i).sum() * 0.5 + noise * rng.normal();
    }
    return p;
}

SvrConfig tight(double C = 1.0, double eps = 0.1) {
    SvrConfig cfg;
    cfg.C = C;
    cfg.epsilon = eps;
    cfg.tol = 1e-6;
    return cfg;
}

} // namespace

TEST(Svr, DualFeasibility) {
    const auto p = random_problem(40, 4, 1);
    const auto cfg = tight(0.5);
    const auto model = svr_train(p.X, p.y, cfg);
    EXPECT_TRUE(model.converged);
    EXPECT_NEAR(model.dual_coefficients.sum(), 0.0, 1e-9);
    EXPECT_LE(model.dual_coefficients.cwiseAbs().maxCoeff(), cfg.C + 1e-12);
    const Eigen::VectorXd w = p.X.transpose() * model.dual_coefficients;
    EXPECT_LT((w - model.weights).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Svr, ComplementarySlackness) {
    const auto p = random_problem(30, 3, 2);
    const auto cfg = tight(1.0, 0.2);
    const auto model = svr_train(p.X, p.y, cfg);
    const Eigen::VectorXd r = p.y - svr_predict(model, p.X);
    for (Index i = 0; i < 30; ++i) {
        const double d = model.dual_coefficients[i];
        if (std::abs(d) < 1e-9) EXPECT_LE(std::abs(r[i]), cfg.epsilon + 1e-4);
        if (std::abs(r[i]) > cfg.epsilon + 1e-4) EXPECT_NEAR(std::abs(d), cfg.C, 1e-9);
        if (std::abs(d) > 1e-9 && std::abs(d) < cfg.C - 1e-9) EXPECT_NEAR(std::abs(r[i]), cfg.epsilon, 1e-4);
    }
}

TEST(Svr, MatchesOracle) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        const auto p = random_problem(8, 3, seed);
        const auto model = svr_train(p.X, p.y, tight());
        const auto oracle = oracle_svr(p.X, p.y, 1.0, 0.1);
        EXPECT_LT((svr_predict(model, p.X) - svr_predict(oracle, p.X)).cwiseAbs().maxCoeff(), 1e-4);
        EXPECT_NEAR(svr_dual_objective(p.X, p.y, model.dual_coefficients, 0.1),
                    svr_dual_objective(p.X, p.y, oracle.dual_coefficients, 0.1), 1e-6);
    }
}

TEST(Svr, WideTubeGivesConstant) {
    const auto p = random_problem(20, 2, 3);
    const double eps = p.y.maxCoeff() - p.y.minCoeff() + 1;
    const auto model = svr_train(p.X, p.y, tight(1.0, eps));
    EXPECT_EQ(model.weights.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(model.support_indices.empty());
}

TEST(Svr, PredictionAffineInFeatures) {
    const auto p = random_problem(25, 3, 4);
    const auto model = svr_train(p.X, p.y, tight());
    Rng rng(9);
    Eigen::MatrixXd a(1, 3), b(1, 3);
    for (Index j = 0; j < 3; ++j) {
        a(0, j) = rng.normal();
        b(0, j) = rng.normal();
    }
    const double t = 0.3;
    const Eigen::MatrixXd mix = t * a + (1 - t) * b;
    EXPECT_NEAR(svr_predict(model, mix)[0], t * svr_predict(model, a)[0] + (1 - t) * svr_predict(model, b)[0], 1e-12);
}

TEST(Svr, ExactLinearFitWithLargeC) {
    Problem p = random_problem(30, 2, 5, 0.0);
    const auto model = svr_train(p.X, p.y, tight(100.0, 1e-4));
    EXPECT_LT((svr_predict(model, p.X) - p.y).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_NEAR(model.weights[0], 0.5, 1e-3);
}

TEST(Svr, Validation) {
    const auto p = random_problem(5, 2, 6);
    SvrConfig bad;
    bad.C = 0;
    EXPECT_THROW(svr_train(p.X, p.y, bad), ValidationError);
    bad = {};
    bad.epsilon = -1;
    EXPECT_THROW(svr_train(p.X, p.y, bad), ValidationError);
    EXPECT_THROW(svr_train(p.X.topRows(1), p.y.head(1)), ValidationError);
    const auto model = svr_train(p.X, p.y);
    EXPECT_THROW(svr_predict(model, Eigen::MatrixXd::Ones(2, 3)), ValidationError);
}

TEST(Svr, ExtractWeightsInFeatureOrder) {
    const auto p = random_problem(15, 3, 7);
    const auto model = svr_train(p.X, p.y);
    const auto w = extract_weights(model);
    ASSERT_EQ(w.size(), 3u);
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(w[static_cast<std::size_t>(j)], model.weights[j]);
}

TEST(GridSearch, DefaultGridAndTieBreak) {
    const auto grid = default_c_grid();
    ASSERT_EQ(grid.size(), 21u);
    EXPECT_EQ(grid.front(), std::ldexp(1.0, -10));
    EXPECT_EQ(grid.back(), 1024.0);
    // Constant validation labels leave R^2 undefined.
    const auto p = random_problem(12, 2, 8);
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(12, 0.5);
    const std::vector<double> small{4.0, 0.25, 1.0};
    EXPECT_THROW(grid_search_C(p.X, flat, small, 3, 1), ValidationError);
    const auto res = grid_search_C(p.X, p.y, small, 3, 1);
    EXPECT_EQ(res.scores.size(), 3u);
    double best = -1e300;
    for (const auto& [c, s] : res.scores) best = std::max(best, s);
    EXPECT_EQ(res.scores.at(res.best_C), best);
}

TEST(GridSearch, Deterministic) {
    const auto p = random_problem(30, 3, 9);
    const auto grid = default_c_grid();
    const auto a = grid_search_C(p.X, p.y, grid, 3, 5);
    const auto b = grid_search_C(p.X, p.y, grid, 3, 5);
    EXPECT_EQ(a.best_C, b.best_C);
    EXPECT_EQ(a.scores, b.scores);
}
