#include "radsens/analysis.hpp"
#include "radsens/cli.hpp"
#include "radsens/error.hpp"
#include "radsens/evaluate.hpp"
#include "radsens/lasso.hpp"
#include "radsens/matrixio.hpp"
#include "radsens/preprocess.hpp"
#include "radsens/selection.hpp"
#include "radsens/svr.hpp"
#include "radsens/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace radsens;

namespace {

AlignedDataset make_dataset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> samples,
                            std::vector<std::string> genes, const std::string& omic) {
    AlignedDataset ds;
    if (samples.empty()) {
        for (Eigen::Index i = 0; i < X.rows(); ++i) samples.push_back("S" + std::to_string(i + 1));
    }
    if (genes.empty()) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) genes.push_back("G" + std::to_string(j + 1));
    }
    ds.matrix = ExpressionMatrix(std::move(samples), std::move(genes), X);
    ds.labels = y;
    ds.provenance = parse_omic(omic);
    ds.validate();
    return ds;
}

py::dict summary_dict(const MetricSummary& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["ci_low"] = s.ci_low;
    d["ci_high"] = s.ci_high;
    d["raw"] = s.raw;
    return d;
}

} // namespace

PYBIND11_MODULE(_radsens, m) {
    m.doc() = "Radiation-response prediction core";

    // Translators run newest first, so the base class goes in first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<ExpressionMatrix>(m, "ExpressionMatrix")
        .def_readonly("sample_ids", &ExpressionMatrix::sample_ids)
        .def_readonly("gene_ids", &ExpressionMatrix::gene_ids)
        .def_readonly("values", &ExpressionMatrix::values)
        .def_property_readonly("missing", [](const ExpressionMatrix& x) {
            if (x.missing.size() == 0) {
                return Eigen::MatrixXi(Eigen::MatrixXi::Zero(x.n_samples(), x.n_genes()));
            }
            return Eigen::MatrixXi(x.missing.cast<int>().matrix());
        });

    m.def("read_expression_matrix", [](const std::filesystem::path& path, const std::string& orientation) {
        return read_expression_matrix(path, parse_orientation(orientation));
    }, py::arg("path"), py::arg("orientation") = "samples_as_rows");

    m.def("r_squared", &r_squared, py::arg("y"), py::arg("yhat"));
    m.def("rmse", &rmse, py::arg("y"), py::arg("yhat"));

    m.def("zscore", [](const Eigen::MatrixXd& X) {
        std::vector<std::string> s, g;
        for (Eigen::Index i = 0; i < X.rows(); ++i) s.push_back(std::to_string(i));
        for (Eigen::Index j = 0; j < X.cols(); ++j) g.push_back(std::to_string(j));
        return zscore(ExpressionMatrix(s, g, X)).values;
    }, py::arg("X"));

    m.def("lasso_fit", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lam, double tol) {
        LassoConfig cfg;
        cfg.tol = tol;
        const auto fit = lasso_fit(X, y, lam, cfg);
        return py::make_tuple(fit.coefficients, fit.intercept, fit.converged);
    }, py::arg("X"), py::arg("y"), py::arg("lam"), py::arg("tol") = 1e-7);

    m.def("fit_with_support", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k) {
        const auto fit = fit_with_support(X, y, k);
        return py::make_tuple(fit.coefficients, fit.lambda, fit.support);
    }, py::arg("X"), py::arg("y"), py::arg("k"));

    m.def("oracle_lasso", &oracle_lasso, py::arg("X"), py::arg("y"), py::arg("lam"));

    m.def("svr_train", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, double epsilon, double tol) {
        SvrConfig cfg;
        cfg.C = C;
        cfg.epsilon = epsilon;
        cfg.tol = tol;
        const auto model = svr_train(X, y, cfg);
        return py::make_tuple(model.weights, model.bias, model.dual_coefficients);
    }, py::arg("X"), py::arg("y"), py::arg("C") = 1.0, py::arg("epsilon") = 0.1, py::arg("tol") = 1e-3);

    m.def("select_features", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> genes,
                                std::uint64_t seed, int folds, int repeats, int support_k, int top_per_iter, int final_count) {
        SelectionConfig cfg;
        cfg.seed = seed;
        cfg.folds = folds;
        cfg.repeats = repeats;
        cfg.support_k = support_k;
        cfg.lasso.target_support = support_k;
        cfg.top_per_iter = top_per_iter;
        cfg.final_count = final_count;
        const auto ranking = select_features(make_dataset(X, y, {}, std::move(genes), "transcriptome"), cfg);
        std::vector<std::pair<std::string, double>> out;
        for (const auto& e : ranking.entries) out.emplace_back(e.gene_id, e.importance);
        return out;
    }, py::arg("X"), py::arg("y"), py::arg("genes") = std::vector<std::string>{}, py::arg("seed") = 0, py::arg("folds") = 5,
       py::arg("repeats") = 10, py::arg("support_k") = 30, py::arg("top_per_iter") = 20, py::arg("final_count") = 20);

    m.def("cross_validate", [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::uint64_t seed, int folds, int repeats,
                               std::vector<double> c_grid, double epsilon) {
        CvOptions opts;
        opts.seed = seed;
        opts.folds = folds;
        opts.repeats = repeats;
        if (!c_grid.empty()) opts.c_grid = std::move(c_grid);
        opts.svr.epsilon = epsilon;
        const auto ds = make_dataset(X, y, {}, {}, "transcriptome");
        const auto cv = cross_validate(ds, ds.matrix.gene_ids, opts);
        py::dict d;
        d["r_squared"] = summary_dict(cv.r_squared);
        d["rmse"] = summary_dict(cv.rmse);
        return d;
    }, py::arg("X"), py::arg("y"), py::arg("seed") = 0, py::arg("folds") = 5, py::arg("repeats") = 10,
       py::arg("c_grid") = std::vector<double>{}, py::arg("epsilon") = 0.1);

    m.def("pearson", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return pearson(a, b); });

    m.def("vif", [](const Eigen::MatrixXd& X) {
        const auto ds = make_dataset(X, Eigen::VectorXd::Constant(X.rows(), 0.5), {}, {}, "transcriptome");
        std::vector<double> out;
        for (const auto& r : vif(ds, ds.matrix.gene_ids)) out.push_back(r.infinite ? INFINITY : r.vif);
        return out;
    }, py::arg("X"));

    m.def("lq_fit", [](std::vector<double> doses, std::vector<double> sf) {
        const auto fit = lq_fit(doses, sf);
        return py::make_tuple(fit.alpha, fit.beta, fit.sf2);
    }, py::arg("doses"), py::arg("survival"));

    m.def("synth", [](const std::string& preset, std::uint64_t seed) {
        const auto data = generate(synth_preset(preset, seed));
        py::dict d;
        d["transcriptome"] = data.a.matrix.values;
        d["proteome"] = data.b.matrix.values;
        d["labels"] = data.a.labels;
        d["genes"] = data.a.matrix.gene_ids;
        d["planted"] = data.truth.planted;
        return d;
    }, py::arg("preset"), py::arg("seed") = 0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
