#ifndef RADSENS_LASSO_HPP
#define RADSENS_LASSO_HPP

#include "radsens/dataset.hpp"

#include <vector>

namespace radsens {

/**
 * @file lasso.hpp
 *
 * @brief Cyclic coordinate-descent Lasso with support-size targeting.
 *
 * The objective is (1/(2n)) ||y - b0 - X beta||^2 + lambda ||beta||_1.
 * The intercept b0 is unpenalized and handled by centring both X and y,
 * so every gradient and KKT quantity below uses the centred columns.
 */

struct LassoConfig {
    /// Support size requested by `fit_with_support()` when the caller has no better value.
    int target_support = 30;
    /// Upper bound on coordinate sweeps per fit.
    int max_iter = 10000;
    /// Convergence threshold on the largest coefficient change in a full sweep.
    double tol = 1e-7;
    int lambda_bisection_steps = 60;
    /// Record the objective after every sweep into `LassoFit::objective_trace`.
    bool record_objective = false;

    void validate() const;
};

struct LambdaProbe {
    double lambda = 0;
    Index support_size = 0;
};

struct LassoFit {
    Eigen::VectorXd coefficients;
    double intercept = 0;
    double lambda = 0;
    std::vector<Index> support;
    int iterations_used = 0;
    bool converged = false;
    /// Set by `fit_with_support()` when the support had to be cut down to k entries.
    bool truncated = false;
    /// Lambda values probed by `fit_with_support()`, in probe order.
    std::vector<LambdaProbe> trace;
    std::vector<double> objective_trace;
};

struct KktReport {
    double max_violation = 0;
    /// Per-coordinate stationarity violation.
    Eigen::VectorXd residuals;
};

/// Smallest lambda whose solution is all zeros: max_j |x_j' (y - mean(y))| / n.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// The Lasso objective at `coefficients` (intercept profiled out by centring).
double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& coefficients, double lambda);

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoConfig& cfg = {},
                   const Eigen::VectorXd* warm_start = nullptr);

/**
 * Bisect log(lambda) over [lambda_max * 1e-4, lambda_max] for a fit with exactly `k` non-zeros.
 * If every probe skips past k, the probe with the smallest support above k is cut down to its
 * k largest |coefficient| entries and flagged `truncated`.
 */
LassoFit fit_with_support(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, const LassoConfig& cfg = {});

/// Zero coefficients need |g_j| <= lambda; non-zeros need g_j = lambda sign(beta_j), with g_j = x_j' r / n.
KktReport verify_kkt(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoFit& fit);

} // namespace radsens

#endif
