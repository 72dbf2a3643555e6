#ifndef RADSENS_SVR_HPP
#define RADSENS_SVR_HPP

#include "radsens/dataset.hpp"
#include "radsens/report.hpp"

#include <cstdint>
#include <map>

namespace radsens {

/**
 * @file svr.hpp
 *
 * @brief Linear-kernel epsilon-insensitive support vector regression.
 *
 * Training solves the dual
 *   min 1/2 (a - a*)' K (a - a*) + eps sum(a + a*) - y' (a - a*)
 *   s.t. sum(a - a*) = 0, 0 <= a, a* <= C,   K = X X',
 * by sequential minimal optimization with second-order working-set selection.
 * The model is f(x) = w'x + b with w = sum_i (a_i - a*_i) x_i.
 */

struct SvrConfig {
    /// Regularization constant bounding each dual coefficient.
    double C = 1.0;
    /// Half-width of the insensitive tube.
    double epsilon = 0.1;
    /// Stop once the maximal KKT violation of the working-set pair drops below this.
    double tol = 1e-3;
    long max_iter = 100000;

    void validate() const;
};

struct SvrModel {
    Eigen::VectorXd weights;
    double bias = 0;
    /// a_i - a*_i per training sample, each in [-C, C].
    Eigen::VectorXd dual_coefficients;
    SvrConfig config;
    std::vector<Index> support_indices;
    long iterations = 0;
    bool converged = false;
};

nlohmann::json to_json(const SvrModel& model, std::span<const std::string> genes = {});
Report to_report(const SvrModel& model, std::span<const std::string> genes);

SvrModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrConfig& cfg = {});

Eigen::VectorXd svr_predict(const SvrModel& model, const Eigen::MatrixXd& X);

/// Weights in feature order.
std::vector<double> extract_weights(const SvrModel& model);

/// 2^-10, 2^-9, ..., 2^10.
std::vector<double> default_c_grid();

struct GridSearchResult {
    double best_C = 0;
    /// C -> mean validation R^2 across the inner folds.
    std::map<double, double> scores;
};

Report to_report(const GridSearchResult& result);

/**
 * Mean validation R^2 over one seeded `folds`-fold split for each C in `grid`.
 * The best C maximizes the mean score; ties go to the smallest C.
 * Only `base.epsilon`, `base.tol` and `base.max_iter` are taken from `base`.
 */
GridSearchResult grid_search_C(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::span<const double> grid, int folds,
                               std::uint64_t seed, const SvrConfig& base = {});

} // namespace radsens

#endif
