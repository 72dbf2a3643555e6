#include "radsens/svr.hpp"
#include "radsens/error.hpp"
#include "radsens/evaluate.hpp"
#include "radsens/selection.hpp"

#include <cmath>
#include <limits>

namespace radsens {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * SMO over the 2n-variable form: variable t < n is a_t (sign +1), t >= n is a*_{t-n} (sign -1).
 * Q_st = sign_s sign_t K(s mod n, t mod n), linear term p = [eps - y; eps + y].
 */
class SmoSolver {
public:
    SmoSolver(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, const SvrConfig& cfg)
        : kernel_(kernel), n_(y.size()), cfg_(cfg), alpha_(Eigen::VectorXd::Zero(2 * n_)), gradient_(2 * n_) {
        gradient_.head(n_) = cfg.epsilon - y.array();
        gradient_.tail(n_) = cfg.epsilon + y.array();
    }

    void run() {
        while (iterations_ < cfg_.max_iter) {
            Index i = -1;
            Index j = -1;
            if (select_working_set(i, j)) {
                converged_ = true;
                return;
            }
            update(i, j);
            ++iterations_;
        }
    }

    SvrModel model(const Eigen::MatrixXd& X) const {
        SvrModel out;
        out.config = cfg_;
        out.iterations = iterations_;
        out.converged = converged_;
        out.dual_coefficients = alpha_.head(n_) - alpha_.tail(n_);
        out.weights = X.transpose() * out.dual_coefficients;
        out.bias = -rho();
        for (Index i = 0; i < n_; ++i) {
            if (out.dual_coefficients[i] != 0) {
                out.support_indices.push_back(i);
            }
        }
        return out;
    }

private:
    double sign(Index t) const { return t < n_ ? 1.0 : -1.0; }
    double q(Index s, Index t) const { return sign(s) * sign(t) * kernel_(s % n_, t % n_); }
    bool at_upper(Index t) const { return alpha_[t] >= cfg_.C; }
    bool at_lower(Index t) const { return alpha_[t] <= 0; }

    /// Returns true when the pair violation is below tolerance.
    bool select_working_set(Index& out_i, Index& out_j) const {
        double gmax = -kInf;
        Index i = -1;
        for (Index t = 0; t < 2 * n_; ++t) {
            if (sign(t) > 0) {
                if (!at_upper(t) && -gradient_[t] >= gmax) {
                    gmax = -gradient_[t];
                    i = t;
                }
            } else if (!at_lower(t) && gradient_[t] >= gmax) {
                gmax = gradient_[t];
                i = t;
            }
        }

        double gmax2 = -kInf;
        double best = kInf;
        Index j = -1;
        const double qii = i >= 0 ? q(i, i) : 0.0;
        for (Index t = 0; t < 2 * n_; ++t) {
            const double qtt = q(t, t);
            if (sign(t) > 0) {
                if (at_lower(t)) {
                    continue;
                }
                const double diff = gmax + gradient_[t];
                gmax2 = std::max(gmax2, gradient_[t]);
                if (i >= 0 && diff > 0) {
                    const double quad = std::max(qii + qtt - 2.0 * sign(i) * q(i, t), kTau);
                    const double gain = -(diff * diff) / quad;
                    if (gain <= best) {
                        best = gain;
                        j = t;
                    }
                }
            } else {
                if (at_upper(t)) {
                    continue;
                }
                const double diff = gmax - gradient_[t];
                gmax2 = std::max(gmax2, -gradient_[t]);
                if (i >= 0 && diff > 0) {
                    const double quad = std::max(qii + qtt + 2.0 * sign(i) * q(i, t), kTau);
                    const double gain = -(diff * diff) / quad;
                    if (gain <= best) {
                        best = gain;
                        j = t;
                    }
                }
            }
        }
        out_i = i;
        out_j = j;
        return gmax + gmax2 < cfg_.tol || j < 0;
    }

    void update(Index i, Index j) {
        const double C = cfg_.C;
        const double old_i = alpha_[i];
        const double old_j = alpha_[j];
        const double qij = q(i, j);
        double& ai = alpha_[i];
        double& aj = alpha_[j];

        if (sign(i) != sign(j)) {
            const double quad = std::max(q(i, i) + q(j, j) + 2.0 * qij, kTau);
            const double delta = (-gradient_[i] - gradient_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0) {
                if (aj < 0) {
                    aj = 0;
                    ai = diff;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = -diff;
            }
            if (diff > 0) {
                if (ai > C) {
                    ai = C;
                    aj = C - diff;
                }
            } else if (aj > C) {
                aj = C;
                ai = C + diff;
            }
        } else {
            const double quad = std::max(q(i, i) + q(j, j) - 2.0 * qij, kTau);
            const double delta = (gradient_[i] - gradient_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) {
                    ai = C;
                    aj = sum - C;
                }
            } else if (aj < 0) {
                aj = 0;
                ai = sum;
            }
            if (sum > C) {
                if (aj > C) {
                    aj = C;
                    ai = sum - C;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = sum;
            }
        }

        const double di = ai - old_i;
        const double dj = aj - old_j;
        const double si = sign(i);
        const double sj = sign(j);
        const auto ki = kernel_.col(i % n_);
        const auto kj = kernel_.col(j % n_);
        // Row t of Q is sign_t * sign_s * K; split into the a and a* halves.
        const Eigen::VectorXd step = si * di * ki + sj * dj * kj;
        gradient_.head(n_) += step;
        gradient_.tail(n_) -= step;
    }

    double rho() const {
        double ub = kInf;
        double lb = -kInf;
        double free_sum = 0;
        Index n_free = 0;
        for (Index t = 0; t < 2 * n_; ++t) {
            const double yg = sign(t) * gradient_[t];
            if (at_upper(t)) {
                if (sign(t) < 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (at_lower(t)) {
                if (sign(t) > 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                free_sum += yg;
            }
        }
        return n_free > 0 ? free_sum / static_cast<double>(n_free) : 0.5 * (ub + lb);
    }

    const Eigen::MatrixXd& kernel_;
    Index n_;
    SvrConfig cfg_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd gradient_;
    long iterations_ = 0;
    bool converged_ = false;
};

} // namespace

void SvrConfig::validate() const {
    if (!(C > 0) || !std::isfinite(C)) {
        throw ValidationError("SVR C must be a finite positive value");
    }
    if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
        throw ValidationError("SVR epsilon must be >= 0");
    }
    if (!(tol > 0)) {
        throw ValidationError("SVR tol must be > 0");
    }
    if (max_iter < 1) {
        throw ValidationError("SVR max_iter must be >= 1");
    }
}

SvrModel svr_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrConfig& cfg) {
    cfg.validate();
    if (X.rows() < 2) {
        throw ValidationError("SVR training needs at least two samples");
    }
    if (X.rows() != y.size()) {
        throw ValidationError("SVR design and response lengths differ");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw ValidationError("SVR inputs must be finite");
    }
    const Eigen::MatrixXd kernel = X * X.transpose();
    SmoSolver solver(kernel, y, cfg);
    solver.run();
    return solver.model(X);
}

Eigen::VectorXd svr_predict(const SvrModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.weights.size()) {
        throw ValidationError("SVR model expects " + std::to_string(model.weights.size()) + " features, got " +
                              std::to_string(X.cols()));
    }
    return (X * model.weights).array() + model.bias;
}

std::vector<double> extract_weights(const SvrModel& model) {
    return {model.weights.data(), model.weights.data() + model.weights.size()};
}

std::vector<double> default_c_grid() {
    std::vector<double> grid;
    for (int e = -10; e <= 10; ++e) {
        grid.push_back(std::ldexp(1.0, e));
    }
    return grid;
}

GridSearchResult grid_search_C(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::span<const double> grid, int folds,
                               std::uint64_t seed, const SvrConfig& base) {
    if (grid.empty()) {
        throw ValidationError("the C grid is empty");
    }
    if (X.rows() < folds) {
        throw ValidationError("cannot grid-search with " + std::to_string(X.rows()) + " samples and " + std::to_string(folds) +
                              " folds");
    }
    const auto splits = make_folds(X.rows(), folds, 1, seed);

    struct FoldData {
        Eigen::MatrixXd train_x, valid_x;
        Eigen::VectorXd train_y, valid_y;
    };
    std::vector<FoldData> data;
    for (const auto& split : splits) {
        data.push_back({X(split.train, Eigen::all), X(split.validation, Eigen::all), y(split.train), y(split.validation)});
    }

    GridSearchResult result;
    double best = -kInf;
    for (double C : grid) {
        SvrConfig cfg = base;
        cfg.C = C;
        double total = 0;
        for (const auto& fold : data) {
            const auto model = svr_train(fold.train_x, fold.train_y, cfg);
            total += r_squared(fold.valid_y, svr_predict(model, fold.valid_x));
        }
        const double score = total / static_cast<double>(data.size());
        result.scores[C] = score;
        if (score > best || (score == best && C < result.best_C)) {
            best = score;
            result.best_C = C;
        }
    }
    return result;
}

nlohmann::json to_json(const SvrModel& model, std::span<const std::string> genes) {
    nlohmann::json weights = nlohmann::json::array();
    for (Index j = 0; j < model.weights.size(); ++j) {
        nlohmann::json w = {{"weight", real_json(model.weights[j])}};
        if (static_cast<Index>(genes.size()) == model.weights.size()) {
            w["gene_id"] = genes[static_cast<std::size_t>(j)];
        }
        weights.push_back(std::move(w));
    }
    return {{"weights", std::move(weights)},
            {"bias", real_json(model.bias)},
            {"config",
             {{"C", real_json(model.config.C)},
              {"epsilon", real_json(model.config.epsilon)},
              {"tol", real_json(model.config.tol)},
              {"max_iter", model.config.max_iter}}},
            {"support_size", model.support_indices.size()},
            {"iterations", model.iterations},
            {"converged", model.converged}};
}

Report to_report(const SvrModel& model, std::span<const std::string> genes) {
    Report report;
    report.kind = "svr_model";
    report.body = to_json(model, genes);
    report.table.header = {"gene_id", "weight"};
    for (Index j = 0; j < model.weights.size(); ++j) {
        report.table.rows.push_back(
            {static_cast<Index>(genes.size()) == model.weights.size() ? genes[static_cast<std::size_t>(j)] : std::to_string(j),
             model.weights[j]});
    }
    report.table.rows.push_back({std::string("(bias)"), model.bias});
    return report;
}

Report to_report(const GridSearchResult& result) {
    Report report;
    report.kind = "grid_search";
    report.table.header = {"C", "mean_r_squared"};
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& [C, score] : result.scores) {
        scores.push_back({{"C", real_json(C)}, {"mean_r_squared", real_json(score)}});
        report.table.rows.push_back({C, score});
    }
    report.body = {{"best_C", real_json(result.best_C)}, {"scores", std::move(scores)}};
    return report;
}

} // namespace radsens
