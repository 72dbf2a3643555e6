#ifndef RADSENS_CONFIG_HPP
#define RADSENS_CONFIG_HPP

#include "radsens/evaluate.hpp"
#include "radsens/preprocess.hpp"
#include "radsens/selection.hpp"

#include <filesystem>
#include <optional>

namespace radsens {

/**
 * @brief Every tunable of the pipeline, with module defaults.
 *
 * Config files are INI text. Recognized keys:
 *
 *     seed = 7                      ; top level, also: jobs
 *     [preprocess]  max_missing, redundancy_threshold, sort_genes
 *     [lasso]       max_iter, tol, lambda_bisection_steps, target_support (alias of selection.support_k)
 *     [selection]   folds, repeats, support_k, top_per_iter, final_count
 *     [svr]         C, epsilon, tol, max_iter, c_grid (comma-separated), inner_folds
 *     [evaluate]    folds, repeats, max_count, global_grid_search, reuse_selection_folds
 *
 * Unknown sections or keys and malformed values are rejected.
 */
struct ConfigBundle {
    PreprocessConfig preprocess;
    SelectionConfig selection;
    CvOptions evaluate;
    /// Fixed C for `train`; unset means grid search.
    std::optional<double> fixed_C;
    int max_count = 20;
    /// Explicit seed from the file, if any.
    std::optional<std::uint64_t> seed;
    int jobs = 1;

    /// Propagate seed and jobs into the module configs and validate everything.
    void finalize(std::uint64_t effective_seed);

    nlohmann::json to_json() const;
};

ConfigBundle parse_config(std::string_view text, std::string_view source = "<memory>");
ConfigBundle load_config(const std::filesystem::path& path);

} // namespace radsens

#endif
