#include "radsens/lasso.hpp"
#include "radsens/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace radsens {

namespace {

double soft_threshold(double value, double threshold) {
    if (value > threshold) {
        return value - threshold;
    }
    if (value < -threshold) {
        return value + threshold;
    }
    return 0.0;
}

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() == 0) {
        throw ValidationError("lasso requires at least one sample");
    }
    if (X.rows() != y.size()) {
        throw ValidationError("lasso design and response lengths differ");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw ValidationError("lasso inputs must be finite");
    }
}

/// Centred problem shared by every fit on the same data.
class CoordinateDescent {
public:
    CoordinateDescent(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
        check_inputs(X, y);
        n_ = static_cast<double>(X.rows());
        x_means_ = X.colwise().mean();
        y_mean_ = y.mean();
        xc_ = X.rowwise() - x_means_.transpose();
        yc_ = y.array() - y_mean_;
        col_sq_ = xc_.colwise().squaredNorm().transpose() / n_;
    }

    LassoFit solve(double lambda, const LassoConfig& cfg, const Eigen::VectorXd* warm) const {
        if (!(lambda >= 0) || !std::isfinite(lambda)) {
            throw ValidationError("lambda must be a finite non-negative value");
        }
        const Index p = xc_.cols();
        LassoFit fit;
        fit.lambda = lambda;
        fit.coefficients = warm && warm->size() == p ? *warm : Eigen::VectorXd::Zero(p);
        Eigen::VectorXd residual = yc_ - xc_ * fit.coefficients;

        std::vector<Index> all(static_cast<std::size_t>(p));
        std::iota(all.begin(), all.end(), Index{0});

        auto sweep = [&](const std::vector<Index>& coords) {
            double max_delta = 0;
            for (Index j : coords) {
                if (col_sq_[j] <= 0) {
                    fit.coefficients[j] = 0;
                    continue;
                }
                const double old = fit.coefficients[j];
                const double rho = xc_.col(j).dot(residual) / n_ + col_sq_[j] * old;
                const double updated = soft_threshold(rho, lambda) / col_sq_[j];
                const double delta = updated - old;
                if (delta != 0) {
                    residual.noalias() -= delta * xc_.col(j);
                    fit.coefficients[j] = updated;
                    max_delta = std::max(max_delta, std::abs(delta));
                }
            }
            ++fit.iterations_used;
            if (cfg.record_objective) {
                fit.objective_trace.push_back(residual.squaredNorm() / (2 * n_) + lambda * fit.coefficients.lpNorm<1>());
            }
            return max_delta;
        };

        while (fit.iterations_used < cfg.max_iter) {
            if (sweep(all) < cfg.tol) {
                if (kkt(fit.coefficients, residual, lambda).max_violation <= 10 * cfg.tol) {
                    fit.converged = true;
                    break;
                }
                continue;
            }
            std::vector<Index> active;
            for (Index j = 0; j < p; ++j) {
                if (fit.coefficients[j] != 0) {
                    active.push_back(j);
                }
            }
            while (fit.iterations_used < cfg.max_iter && sweep(active) >= cfg.tol) {
            }
        }

        finish(fit);
        return fit;
    }

    KktReport kkt(const Eigen::VectorXd& coefficients, const Eigen::VectorXd& residual, double lambda) const {
        KktReport report;
        const Eigen::VectorXd gradient = xc_.transpose() * residual / n_;
        report.residuals.resize(gradient.size());
        for (Index j = 0; j < gradient.size(); ++j) {
            if (coefficients[j] == 0) {
                report.residuals[j] = std::max(0.0, std::abs(gradient[j]) - lambda);
            } else {
                report.residuals[j] = std::abs(gradient[j] - lambda * (coefficients[j] > 0 ? 1.0 : -1.0));
            }
        }
        report.max_violation = report.residuals.size() ? report.residuals.maxCoeff() : 0.0;
        return report;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& coefficients) const { return yc_ - xc_ * coefficients; }

    double lambda_max() const { return (xc_.transpose() * yc_).cwiseAbs().maxCoeff() / n_; }

    void finish(LassoFit& fit) const {
        fit.support.clear();
        for (Index j = 0; j < fit.coefficients.size(); ++j) {
            if (fit.coefficients[j] != 0) {
                fit.support.push_back(j);
            }
        }
        fit.intercept = y_mean_ - x_means_.dot(fit.coefficients);
    }

private:
    double n_ = 0;
    Eigen::MatrixXd xc_;
    Eigen::VectorXd yc_;
    Eigen::VectorXd x_means_;
    Eigen::VectorXd col_sq_;
    double y_mean_ = 0;
};

void truncate_support(LassoFit& fit, int k) {
    std::vector<Index> order = fit.support;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(fit.coefficients[a]) > std::abs(fit.coefficients[b]);
    });
    for (std::size_t i = static_cast<std::size_t>(k); i < order.size(); ++i) {
        fit.coefficients[order[i]] = 0;
    }
    fit.truncated = true;
}

} // namespace

void LassoConfig::validate() const {
    if (target_support < 1) {
        throw ValidationError("target_support must be >= 1");
    }
    if (max_iter < 1) {
        throw ValidationError("max_iter must be >= 1");
    }
    if (!(tol > 0)) {
        throw ValidationError("tol must be > 0");
    }
    if (lambda_bisection_steps < 1) {
        throw ValidationError("lambda_bisection_steps must be >= 1");
    }
}

double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.cols() == 0) {
        check_inputs(X, y);
        return 0.0;
    }
    return CoordinateDescent(X, y).lambda_max();
}

double lasso_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& coefficients, double lambda) {
    const double n = static_cast<double>(X.rows());
    const Eigen::MatrixXd xc = X.rowwise() - X.colwise().mean();
    const Eigen::VectorXd r = (y.array() - y.mean()).matrix() - xc * coefficients;
    return r.squaredNorm() / (2 * n) + lambda * coefficients.lpNorm<1>();
}

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const LassoConfig& cfg,
                   const Eigen::VectorXd* warm_start) {
    cfg.validate();
    return CoordinateDescent(X, y).solve(lambda, cfg, warm_start);
}

LassoFit fit_with_support(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k, const LassoConfig& cfg) {
    cfg.validate();
    const Index limit = std::min<Index>(X.rows() - 1, X.cols());
    if (k < 1 || k > limit) {
        throw ValidationError("support size " + std::to_string(k) + " must lie in [1, " + std::to_string(limit) + "]");
    }
    const CoordinateDescent solver(X, y);
    const double top = solver.lambda_max();
    if (!(top > 0)) {
        throw ValidationError("response has no variance to explain; no non-empty support exists");
    }

    double lo = std::log(top * 1e-4);
    double hi = std::log(top);
    std::vector<LambdaProbe> trace;
    std::optional<LassoFit> above; // smallest support > k seen so far
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(X.cols());

    auto probe = [&](double log_lambda) {
        auto fit = solver.solve(std::exp(log_lambda), cfg, &warm);
        warm = fit.coefficients;
        trace.push_back({fit.lambda, static_cast<Index>(fit.support.size())});
        return fit;
    };

    auto settle = [&](LassoFit fit) {
        if (static_cast<Index>(fit.support.size()) > k) {
            truncate_support(fit, k);
            solver.finish(fit);
        }
        fit.trace = trace;
        return fit;
    };

    for (int step = 0; step < cfg.lambda_bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        auto fit = probe(mid);
        const auto size = static_cast<Index>(fit.support.size());
        if (size == k) {
            return settle(std::move(fit));
        }
        if (size > k) {
            lo = mid;
            if (!above || size < static_cast<Index>(above->support.size())) {
                above = std::move(fit);
            }
        } else {
            hi = mid;
        }
    }

    if (!above) {
        auto fit = probe(std::log(top * 1e-4));
        if (static_cast<Index>(fit.support.size()) < k) {
            throw ValidationError("largest attainable support (" + std::to_string(fit.support.size()) +
                                  ") is below the requested " + std::to_string(k));
        }
        return settle(std::move(fit));
    }
    return settle(std::move(*above));
}

KktReport verify_kkt(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const LassoFit& fit) {
    const CoordinateDescent solver(X, y);
    return solver.kkt(fit.coefficients, solver.residual(fit.coefficients), fit.lambda);
}

} // namespace radsens
