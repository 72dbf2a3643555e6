#ifndef RADSENS_MANIFEST_HPP
#define RADSENS_MANIFEST_HPP

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace radsens {

/// Hex SHA-256 of a file's contents.
std::string file_sha256(const std::filesystem::path& path);

/**
 * @brief Reproducibility record written next to every set of outputs.
 *
 * Inputs are recorded by file name and content digest, outputs by path relative to the output directory,
 * so two runs over identical inputs produce identical manifests regardless of where files live.
 */
struct RunManifest {
    std::string subcommand;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;

    /// Writes `manifest.json` into `out_dir` and returns its path.
    std::filesystem::path write(const std::filesystem::path& out_dir) const;
};

std::string tool_version();

} // namespace radsens

#endif
