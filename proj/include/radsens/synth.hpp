#ifndef RADSENS_SYNTH_HPP
#define RADSENS_SYNTH_HPP

#include "radsens/dataset.hpp"
#include "radsens/report.hpp"
#include "radsens/svr.hpp"

#include <cstdint>

namespace radsens {

/**
 * @brief Parameters of the paired-omics generator.
 *
 * Omic a has `n_samples_a` cell lines; omic b covers the first `n_samples_b` of them.
 * Genes are iid standard normal in omic a; omic b is rho * a + sqrt(1 - rho^2) * noise, gene by gene.
 * Labels are y = X_a beta + noise, mapped affinely onto [0.05, 0.95].
 */
struct SynthConfig {
    Index n_samples_a = 73;
    Index n_samples_b = 46;
    Index n_genes = 500;
    Index n_signal = 10;
    /// Smallest planted |coefficient|; magnitudes are spread evenly up to `signal_magnitude * signal_spread`.
    double signal_magnitude = 1.0;
    double signal_spread = 2.0;
    double noise_sd = 0.1;
    double cross_omic_rho = 0.4;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Named presets: `recovery`, `concordance`, `tiny-qp`.
SynthConfig synth_preset(std::string_view name, std::uint64_t seed);

struct SynthTruth {
    std::vector<std::string> planted;
    std::vector<Index> planted_indices;
    /// Coefficients on the raw (pre-squash) label scale.
    Eigen::VectorXd coefficients;
    std::string description;
};

Report to_report(const SynthTruth& truth);

struct SynthData {
    AlignedDataset a;
    AlignedDataset b;
    LabelTable labels;
    SynthTruth truth;
};

SynthData generate(const SynthConfig& cfg);

/**
 * Exhaustive Lasso reference for p <= 12.
 * Every sign pattern in {-1, 0, +1}^p fixes a quadratic whose stationary point is solved directly;
 * the candidate with the lowest true objective is returned.
 */
Eigen::VectorXd oracle_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

/// 1/2 d'K d + eps ||d||_1 - y'd for dual coefficients d = a - a*.
double svr_dual_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& dual, double epsilon);

/**
 * Dense reference SVR for n <= 10: accelerated projected gradient on the 2n-variable dual,
 * followed by an exact equality-constrained solve on the identified free set.
 */
SvrModel oracle_svr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, double epsilon);

} // namespace radsens

#endif
