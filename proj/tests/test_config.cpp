#include "radsens/config.hpp"
#include "radsens/error.hpp"

#include <gtest/gtest.h>

using namespace radsens;

TEST(Config, DefaultsFinalize) {
    ConfigBundle cfg;
    cfg.finalize(0);
    EXPECT_EQ(cfg.selection.support_k, 30);
    EXPECT_EQ(cfg.selection.top_per_iter, 20);
    EXPECT_EQ(cfg.preprocess.max_missing, 6);
    EXPECT_EQ(cfg.preprocess.redundancy_threshold, 0.7);
    EXPECT_EQ(cfg.evaluate.folds, 5);
    EXPECT_EQ(cfg.evaluate.repeats, 10);
    EXPECT_EQ(cfg.evaluate.c_grid.size(), 21u);
    EXPECT_FALSE(cfg.fixed_C);
    EXPECT_EQ(cfg.to_json()["svr"]["C"], "auto");
}

TEST(Config, ParsesEverySection) {
    const auto cfg = parse_config(R"(seed = 7
jobs = 2
[preprocess]
max_missing = 3
redundancy_threshold = 0.8
sort_genes = yes
[lasso]
tol = 1e-9
target_support = 12
[selection]
repeats = 4
top_per_iter = 6
[svr]
C = 2.5
epsilon = 0.05
c_grid = 0.5, 1 ,2
[evaluate]
max_count = 9
global_grid_search = true
)");
    EXPECT_EQ(*cfg.seed, 7u);
    EXPECT_EQ(cfg.jobs, 2);
    EXPECT_EQ(cfg.preprocess.max_missing, 3);
    EXPECT_EQ(cfg.preprocess.redundancy_threshold, 0.8);
    EXPECT_TRUE(cfg.preprocess.sort_genes);
    EXPECT_EQ(cfg.selection.lasso.tol, 1e-9);
    EXPECT_EQ(cfg.selection.support_k, 12);
    EXPECT_EQ(cfg.selection.repeats, 4);
    EXPECT_EQ(*cfg.fixed_C, 2.5);
    EXPECT_EQ(cfg.evaluate.svr.epsilon, 0.05);
    EXPECT_EQ(cfg.evaluate.c_grid, (std::vector<double>{0.5, 1, 2}));
    EXPECT_EQ(cfg.max_count, 9);
    EXPECT_TRUE(cfg.evaluate.global_grid_search);
}

TEST(Config, FinalizePropagates) {
    auto cfg = parse_config("jobs = 3\n[selection]\nsupport_k = 15\ntop_per_iter = 10\n");
    cfg.finalize(42);
    EXPECT_EQ(cfg.selection.seed, 42u);
    EXPECT_EQ(cfg.evaluate.seed, 42u);
    EXPECT_EQ(cfg.selection.jobs, 3);
    EXPECT_EQ(cfg.evaluate.jobs, 3);
    EXPECT_EQ(cfg.selection.lasso.target_support, 15);
    EXPECT_EQ(cfg.to_json()["seed"], 42);
}

TEST(Config, RejectsUnknownAndMalformed) {
    EXPECT_THROW(parse_config("[bogus]\nx = 1\n"), ValidationError);
    EXPECT_THROW(parse_config("[svr]\ngamma = 1\n"), ValidationError);
    EXPECT_THROW(parse_config("colour = red\n"), ValidationError);
    EXPECT_THROW(parse_config("seed = 1.5\n"), ValidationError);
    EXPECT_THROW(parse_config("[preprocess]\nsort_genes = maybe\n"), ValidationError);
    EXPECT_THROW(parse_config("[svr]\nc_grid = 1,,2\n"), ValidationError);
    EXPECT_THROW(parse_config("[svr\n"), ParseError);
    try {
        parse_config("[svr]\ngamma = 1\n", "run.ini");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("svr.gamma"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("run.ini"), std::string::npos);
    }
}

TEST(Config, FinalizeValidates) {
    auto bad = parse_config("[svr]\nC = 0\n");
    EXPECT_THROW(bad.finalize(0), ValidationError);
    auto jobs = parse_config("jobs = 0\n");
    EXPECT_THROW(jobs.finalize(0), ValidationError);
    auto thresh = parse_config("[preprocess]\nredundancy_threshold = 1.5\n");
    EXPECT_THROW(thresh.finalize(0), ValidationError);
    auto top = parse_config("[selection]\ntop_per_iter = 40\n");
    EXPECT_THROW(top.finalize(0), ValidationError);
}

TEST(Config, MissingFileIsIoError) {
    EXPECT_THROW(load_config("/nonexistent/radsens.ini"), IoError);
}
