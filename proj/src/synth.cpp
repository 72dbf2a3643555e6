#include "radsens/synth.hpp"
#include "radsens/error.hpp"
#include "radsens/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace radsens {

namespace {

std::string numbered(const char* prefix, Index i, int width) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%s%0*lld", prefix, width, static_cast<long long>(i));
    return buffer;
}

void inject_missing(ExpressionMatrix& m, double rate, Rng& rng) {
    for (Index g = 0; g < m.n_genes(); ++g) {
        for (Index s = 0; s < m.n_samples(); ++s) {
            if (rng.uniform() < rate) {
                m.values(s, g) = std::numeric_limits<double>::quiet_NaN();
                m.missing(s, g) = true;
            }
        }
    }
}

/// Euclidean projection onto {0 <= a <= C, sum(a_head) - sum(a_tail) = 0} by bisection on the multiplier.
Eigen::VectorXd project_dual(const Eigen::VectorXd& v, Index n, double C) {
    auto sign = [n](Index t) { return t < n ? 1.0 : -1.0; };
    auto at = [&](double mu) {
        Eigen::VectorXd a(v.size());
        double balance = 0;
        for (Index t = 0; t < v.size(); ++t) {
            a[t] = std::clamp(v[t] - mu * sign(t), 0.0, C);
            balance += sign(t) * a[t];
        }
        return std::pair{a, balance};
    };
    double lo = -(v.cwiseAbs().maxCoeff() + C) - 1.0;
    double hi = -lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (at(mid).second > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return at(0.5 * (lo + hi)).first;
}

} // namespace

void SynthConfig::validate() const {
    if (n_samples_a < 2 || n_samples_b < 2) {
        throw ValidationError("synthetic cohorts need at least two samples each");
    }
    if (n_samples_b > n_samples_a) {
        throw ValidationError("omic b samples must be a subset of omic a samples");
    }
    if (n_genes < 1 || n_signal < 0 || n_signal > n_genes) {
        throw ValidationError("need 0 <= n_signal <= n_genes and n_genes >= 1");
    }
    if (!(noise_sd >= 0) || !(signal_magnitude >= 0) || !(signal_spread >= 1)) {
        throw ValidationError("noise_sd and signal_magnitude must be >= 0, signal_spread >= 1");
    }
    if (!(cross_omic_rho >= -1 && cross_omic_rho <= 1)) {
        throw ValidationError("cross_omic_rho must lie in [-1, 1]");
    }
    if (!(missing_rate >= 0 && missing_rate < 1)) {
        throw ValidationError("missing_rate must lie in [0, 1)");
    }
}

SynthConfig synth_preset(std::string_view name, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    if (name == "recovery") {
        cfg.n_samples_a = 80;
        cfg.n_samples_b = 60;
        cfg.n_genes = 500;
        cfg.n_signal = 10;
        cfg.noise_sd = 0.1;
        cfg.cross_omic_rho = 0.8;
    } else if (name == "concordance") {
        cfg.n_samples_a = 73;
        cfg.n_samples_b = 46;
        cfg.n_genes = 500;
        cfg.n_signal = 10;
        cfg.noise_sd = 0.1;
        cfg.cross_omic_rho = 0.4;
        cfg.missing_rate = 0.01;
    } else if (name == "tiny-qp") {
        cfg.n_samples_a = 8;
        cfg.n_samples_b = 8;
        cfg.n_genes = 3;
        cfg.n_signal = 2;
        cfg.noise_sd = 0.1;
        cfg.cross_omic_rho = 0.9;
    } else {
        throw ValidationError("unknown synthetic preset '" + std::string(name) + "'");
    }
    return cfg;
}

SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, streams::synth));
    const Index n = cfg.n_samples_a;
    const Index p = cfg.n_genes;

    std::vector<std::string> samples;
    std::vector<std::string> genes;
    for (Index i = 0; i < n; ++i) {
        samples.push_back(numbered("CL", i + 1, 3));
    }
    for (Index g = 0; g < p; ++g) {
        genes.push_back(numbered("G", g + 1, 5));
    }

    Eigen::MatrixXd xa(n, p);
    for (Index g = 0; g < p; ++g) {
        for (Index i = 0; i < n; ++i) {
            xa(i, g) = rng.normal();
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Index{0});
    rng.shuffle(std::span<Index>(order));
    std::vector<Index> planted(order.begin(), order.begin() + cfg.n_signal);
    std::sort(planted.begin(), planted.end());

    SynthTruth truth;
    truth.coefficients = Eigen::VectorXd::Zero(p);
    // Magnitudes evenly spaced over [m, m * spread], assigned in shuffled order with random signs.
    std::vector<Index> rank(planted.size());
    std::iota(rank.begin(), rank.end(), Index{0});
    rng.shuffle(std::span<Index>(rank));
    for (std::size_t j = 0; j < planted.size(); ++j) {
        const double frac = planted.size() > 1 ? static_cast<double>(rank[j]) / static_cast<double>(planted.size() - 1) : 0.0;
        const double magnitude = cfg.signal_magnitude * (1.0 + (cfg.signal_spread - 1.0) * frac);
        truth.coefficients[planted[j]] = rng.uniform() < 0.5 ? -magnitude : magnitude;
        truth.planted.push_back(genes[static_cast<std::size_t>(planted[j])]);
    }
    truth.planted_indices = planted;

    Eigen::VectorXd raw = xa * truth.coefficients;
    for (Index i = 0; i < n; ++i) {
        raw[i] += cfg.noise_sd * rng.normal();
    }
    const double lo = raw.minCoeff();
    const double hi = raw.maxCoeff();
    Eigen::VectorXd labels = hi > lo ? Eigen::VectorXd((0.05 + 0.9 * (raw.array() - lo) / (hi - lo)).matrix())
                                     : Eigen::VectorXd::Constant(n, 0.5);

    const Index nb = cfg.n_samples_b;
    const double rho = cfg.cross_omic_rho;
    const double rest = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    Eigen::MatrixXd xb(nb, p);
    for (Index g = 0; g < p; ++g) {
        for (Index i = 0; i < nb; ++i) {
            xb(i, g) = rho * xa(i, g) + rest * rng.normal();
        }
    }

    SynthData data;
    data.a.matrix = ExpressionMatrix(samples, genes, xa);
    data.a.labels = labels;
    data.a.provenance = Omic::transcriptome;
    data.b.matrix = ExpressionMatrix(std::vector<std::string>(samples.begin(), samples.begin() + nb), genes, xb);
    data.b.labels = labels.head(nb);
    data.b.provenance = Omic::proteome;
    if (cfg.missing_rate > 0) {
        inject_missing(data.a.matrix, cfg.missing_rate, rng);
        inject_missing(data.b.matrix, cfg.missing_rate, rng);
    }
    for (Index i = 0; i < n; ++i) {
        data.labels.entries.emplace(samples[static_cast<std::size_t>(i)], labels[i]);
    }

    char description[256];
    std::snprintf(description, sizeof(description),
                  "y = 0.05 + 0.9 * minmax(X_a beta + %g * N(0,1)); X_a ~ N(0,1); X_b = %g * X_a + %g * N(0,1); missing rate %g",
                  cfg.noise_sd, rho, rest, cfg.missing_rate);
    truth.description = description;
    data.truth = std::move(truth);
    return data;
}

Report to_report(const SynthTruth& truth) {
    Report report;
    report.kind = "synth_truth";
    report.table.header = {"gene_id", "coefficient"};
    nlohmann::json planted = nlohmann::json::array();
    for (std::size_t j = 0; j < truth.planted.size(); ++j) {
        const double coef = truth.coefficients[truth.planted_indices[j]];
        planted.push_back({{"gene_id", truth.planted[j]}, {"coefficient", real_json(coef)}});
        report.table.rows.push_back({truth.planted[j], coef});
    }
    report.body = {{"planted", std::move(planted)}, {"description", truth.description}};
    return report;
}

Eigen::VectorXd oracle_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    const Index p = X.cols();
    if (p > 12) {
        throw ValidationError("exhaustive Lasso oracle supports at most 12 features");
    }
    const double n = static_cast<double>(X.rows());
    const Eigen::MatrixXd xc = X.rowwise() - X.colwise().mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const Eigen::MatrixXd gram = xc.transpose() * xc / n;
    const Eigen::VectorXd corr = xc.transpose() * yc / n;

    auto objective = [&](const Eigen::VectorXd& beta) {
        return (yc - xc * beta).squaredNorm() / (2 * n) + lambda * beta.lpNorm<1>();
    };

    Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
    double best_obj = objective(best);
    std::vector<int> pattern(static_cast<std::size_t>(p), 0);
    long long total = 1;
    for (Index j = 0; j < p; ++j) {
        total *= 3;
    }
    for (long long code = 0; code < total; ++code) {
        long long rest = code;
        std::vector<Index> active;
        for (Index j = 0; j < p; ++j) {
            pattern[static_cast<std::size_t>(j)] = static_cast<int>(rest % 3) - 1;
            rest /= 3;
            if (pattern[static_cast<std::size_t>(j)] != 0) {
                active.push_back(j);
            }
        }
        const auto k = static_cast<Index>(active.size());
        if (k == 0) {
            continue;
        }
        Eigen::MatrixXd sub(k, k);
        Eigen::VectorXd rhs(k);
        for (Index a = 0; a < k; ++a) {
            for (Index b = 0; b < k; ++b) {
                sub(a, b) = gram(active[a], active[b]);
            }
            rhs[a] = corr[active[a]] - lambda * pattern[static_cast<std::size_t>(active[a])];
        }
        const Eigen::VectorXd solution = sub.completeOrthogonalDecomposition().solve(rhs);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
        bool consistent = true;
        for (Index a = 0; a < k; ++a) {
            beta[active[a]] = solution[a];
            consistent = consistent && solution[a] * pattern[static_cast<std::size_t>(active[a])] > 0;
        }
        if (!consistent) {
            continue;
        }
        const double obj = objective(beta);
        if (obj < best_obj) {
            best_obj = obj;
            best = beta;
        }
    }
    return best;
}

double svr_dual_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& dual, double epsilon) {
    const Eigen::VectorXd w = X.transpose() * dual;
    return 0.5 * w.squaredNorm() + epsilon * dual.lpNorm<1>() - y.dot(dual);
}

SvrModel oracle_svr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, double epsilon) {
    const Index n = X.rows();
    if (n > 10) {
        throw ValidationError("dense SVR oracle supports at most 10 samples");
    }
    if (n < 2 || y.size() != n) {
        throw ValidationError("dense SVR oracle needs at least two samples and matching labels");
    }
    const Eigen::MatrixXd K = X * X.transpose();
    Eigen::MatrixXd Q(2 * n, 2 * n);
    Q << K, -K, -K, K;
    Eigen::VectorXd lin(2 * n);
    lin << (epsilon - y.array()).matrix(), (epsilon + y.array()).matrix();

    const double lipschitz = std::max(2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().maxCoeff(), 1e-12);
    auto dual_value = [&](const Eigen::VectorXd& a) { return 0.5 * a.dot(Q * a) + lin.dot(a); };

    // FISTA with function-value restart.
    Eigen::VectorXd a = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd z = a;
    double t = 1;
    double value = dual_value(a);
    for (int it = 0; it < 200000; ++it) {
        const Eigen::VectorXd next = project_dual(z - (Q * z + lin) / lipschitz, n, C);
        const double next_value = dual_value(next);
        if (next_value > value && t > 1) {
            z = a;
            t = 1;
            continue;
        }
        const double t_next = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
        const double change = (next - a).cwiseAbs().maxCoeff();
        z = next + ((t - 1) / t_next) * (next - a);
        a = next;
        t = t_next;
        value = next_value;
        if (change < 1e-12 * std::max(1.0, C)) {
            break;
        }
    }

    Eigen::VectorXd dual = a.head(n) - a.tail(n);

    // Polish: snap bounded coefficients and solve the equality-constrained system on the free set exactly.
    const double snap = 1e-7 * std::max(1.0, C);
    std::vector<Index> free;
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
        if (std::abs(dual[i]) <= snap) {
            fixed[i] = 0;
        } else if (std::abs(dual[i]) >= C - snap) {
            fixed[i] = dual[i] > 0 ? C : -C;
        } else {
            free.push_back(i);
        }
    }
    std::optional<double> bias;
    const auto m = static_cast<Index>(free.size());
    if (m > 0) {
        Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m + 1, m + 1);
        Eigen::VectorXd rhs(m + 1);
        const Eigen::VectorXd k_fixed = K * fixed;
        for (Index r = 0; r < m; ++r) {
            const Index i = free[r];
            for (Index c = 0; c < m; ++c) {
                system(r, c) = K(i, free[c]);
            }
            system(r, m) = 1.0;
            system(m, r) = 1.0;
            rhs[r] = y[i] - epsilon * (dual[i] > 0 ? 1.0 : -1.0) - k_fixed[i];
        }
        rhs[m] = -fixed.sum();
        const Eigen::VectorXd sol = system.completeOrthogonalDecomposition().solve(rhs);
        Eigen::VectorXd polished = fixed;
        bool feasible = (system * sol - rhs).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff());
        for (Index r = 0; r < m && feasible; ++r) {
            polished[free[r]] = sol[r];
            feasible = sol[r] * dual[free[r]] > 0 && std::abs(sol[r]) < C;
        }
        if (feasible && svr_dual_objective(X, y, polished, epsilon) <= svr_dual_objective(X, y, dual, epsilon) + 1e-12) {
            dual = polished;
            bias = sol[m];
        }
    }

    SvrModel model;
    model.config.C = C;
    model.config.epsilon = epsilon;
    model.dual_coefficients = dual;
    model.weights = X.transpose() * dual;
    model.converged = true;
    const Eigen::VectorXd fitted = X * model.weights;
    if (!bias) {
        // Intersect the bias intervals implied by each sample's KKT condition.
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
            const double d = dual[i];
            if (std::abs(d) <= snap) {
                lo = std::max(lo, y[i] - epsilon - fitted[i]);
                hi = std::min(hi, y[i] + epsilon - fitted[i]);
            } else if (d >= C - snap) {
                hi = std::min(hi, y[i] - epsilon - fitted[i]);
            } else if (d <= -C + snap) {
                lo = std::max(lo, y[i] + epsilon - fitted[i]);
            }
        }
        bias = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi) : (std::isfinite(lo) ? lo : hi);
    }
    model.bias = *bias;
    for (Index i = 0; i < n; ++i) {
        if (dual[i] != 0) {
            model.support_indices.push_back(i);
        }
    }
    return model;
}

} // namespace radsens
