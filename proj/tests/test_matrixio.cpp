#include "radsens/error.hpp"
#include "radsens/matrixio.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace radsens;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const auto dir = fs::temp_directory_path() / "radsens_matrixio_test";
    fs::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(ParseMatrix, GenesAsRowsTransposes) {
    const auto m = parse_expression_matrix("\tA\tB\tC\ng1\t1\t2\t3\ng2\t4\t5\t6\n", Orientation::genes_as_rows);
    EXPECT_EQ(m.sample_ids, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(m.gene_ids, (std::vector<std::string>{"g1", "g2"}));
    ASSERT_EQ(m.n_samples(), 3);
    EXPECT_EQ(m.values(1, 0), 2.0);
    EXPECT_EQ(m.values(2, 1), 6.0);
    EXPECT_FALSE(m.has_missing());
}

TEST(ParseMatrix, CommaAndMissingTokens) {
    const auto m = parse_expression_matrix("id,g1,g2\nA,1,NA\nB,,nan\nC,3,4\n", Orientation::samples_as_rows);
    ASSERT_EQ(m.n_genes(), 2);
    EXPECT_TRUE(m.missing(0, 1));
    EXPECT_TRUE(m.missing(1, 0));
    EXPECT_TRUE(m.missing(1, 1));
    EXPECT_FALSE(m.missing(2, 1));
    EXPECT_TRUE(std::isnan(m.values(0, 1)));
    EXPECT_EQ(m.values(2, 1), 4.0);
}

TEST(ParseMatrix, Errors) {
    EXPECT_THROW(parse_expression_matrix("", Orientation::samples_as_rows), ParseError);
    EXPECT_THROW(parse_expression_matrix("x\tg\nA\t1\n", Orientation::samples_as_rows), ParseError);
    EXPECT_THROW(parse_expression_matrix("\tg1\tg2\nA\t1\n", Orientation::samples_as_rows), ParseError);
    EXPECT_THROW(parse_expression_matrix("\tg1\nA\tabc\n", Orientation::samples_as_rows), ParseError);
    EXPECT_THROW(parse_expression_matrix("\tg1\tg1\nA\t1\t2\n", Orientation::samples_as_rows), ParseError);
    EXPECT_THROW(parse_expression_matrix("\tg1\nA\t1\nA\t2\n", Orientation::samples_as_rows), ParseError);
}

TEST(ParseMatrix, RowNumberInMessage) {
    try {
        parse_expression_matrix("\tg1\nA\t1\nB\tfoo\n", Orientation::samples_as_rows, "expr.tsv");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("expr.tsv"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
    }
}

TEST(WriteMatrix, RoundTripsExactly) {
    Eigen::MatrixXd v(2, 3);
    v << 0.1, 1.0 / 3.0, -2.5e-300, 1e300, std::nextafter(1.0, 2.0), 0;
    ExpressionMatrix m({"s1", "s2"}, {"a", "b", "c"}, v);
    m.values(1, 2) = std::numeric_limits<double>::quiet_NaN();
    m.missing(1, 2) = true;
    for (auto o : {Orientation::samples_as_rows, Orientation::genes_as_rows}) {
        const auto path = temp_file("rt.tsv", "");
        write_expression_matrix(m, path, o);
        const auto back = read_expression_matrix(path, o);
        EXPECT_EQ(back.sample_ids, m.sample_ids);
        EXPECT_EQ(back.gene_ids, m.gene_ids);
        EXPECT_TRUE((back.missing == m.missing).all());
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 3; ++j)
                if (!m.missing(i, j)) EXPECT_EQ(back.values(i, j), m.values(i, j));
    }
}

TEST(ReadMatrix, MissingFileIsIoError) {
    EXPECT_THROW(read_expression_matrix("/nonexistent/x.tsv", Orientation::samples_as_rows), IoError);
}

TEST(Labels, HeaderDetectionAndRange) {
    const auto with_header = parse_labels("cell_line\tsf2\nA\t0.5\nB\t1\n");
    EXPECT_EQ(with_header.size(), 2u);
    EXPECT_EQ(with_header.entries.at("B"), 1.0);
    const auto bare = parse_labels("A,0.25\n");
    EXPECT_EQ(bare.entries.at("A"), 0.25);
    EXPECT_THROW(parse_labels("A\t0\n"), ValidationError);
    EXPECT_THROW(parse_labels("A\t1.5\n"), ValidationError);
    EXPECT_THROW(parse_labels("A\t0.5\nA\t0.6\n"), ParseError);
    EXPECT_THROW(parse_labels("A\t0.5\t3\n"), ParseError);
    EXPECT_THROW(parse_labels("A\t0.5\nB\tx\n"), ParseError);
}

TEST(MatchSamples, InnerJoinSorted) {
    const auto m = parse_expression_matrix("\tg\nC\t3\nA\t1\nZ\t9\n", Orientation::samples_as_rows);
    LabelTable labels;
    labels.entries = {{"A", 0.1}, {"C", 0.3}, {"Q", 0.9}};
    const auto ds = match_samples(m, labels);
    EXPECT_EQ(ds.matrix.sample_ids, (std::vector<std::string>{"A", "C"}));
    EXPECT_EQ(ds.labels[0], 0.1);
    EXPECT_EQ(ds.matrix.values(1, 0), 3.0);
    LabelTable none;
    none.entries = {{"X", 0.5}};
    EXPECT_THROW(match_samples(m, none), ValidationError);
}

TEST(GeneList, PlainAndRankingCsv) {
    EXPECT_EQ(read_gene_list(temp_file("plain.txt", "TP53\nATM\n\n")), (std::vector<std::string>{"TP53", "ATM"}));
    EXPECT_EQ(read_gene_list(temp_file("ranking.csv", "rank,gene_id,importance\n1,BRCA1,0.9\n2,ATR,0.5\n")),
              (std::vector<std::string>{"BRCA1", "ATR"}));
    EXPECT_THROW(read_gene_list(temp_file("empty.txt", "")), ValidationError);
}

TEST(ExpressionMatrix, GeneIndicesNameTheMissingGene) {
    ExpressionMatrix m({"a", "b"}, {"g1", "g2"}, Eigen::MatrixXd::Ones(2, 2));
    const std::vector<std::string> ok{"g2", "g1"};
    EXPECT_EQ(m.gene_indices(ok), (std::vector<Index>{1, 0}));
    const std::vector<std::string> bad{"g1", "nope"};
    try {
        m.gene_indices(bad);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
    }
}

TEST(Omic, ParseAndPrint) {
    for (auto o : {Omic::transcriptome, Omic::proteome, Omic::combined}) EXPECT_EQ(parse_omic(to_string(o)), o);
    EXPECT_THROW(parse_omic("metabolome"), ValidationError);
    EXPECT_THROW(parse_orientation("diagonal"), ValidationError);
}
