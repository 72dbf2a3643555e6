#include "radsens/manifest.hpp"
#include "radsens/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#ifndef RADSENS_VERSION
#define RADSENS_VERSION "0.0.0"
#endif

namespace radsens {

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for hashing: " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string tool_version() { return RADSENS_VERSION; }

std::filesystem::path RunManifest::write(const std::filesystem::path& out_dir) const {
    nlohmann::json inputs_json = nlohmann::json::array();
    for (const auto& p : inputs) {
        inputs_json.push_back({{"file", p.filename().string()}, {"sha256", file_sha256(p)}});
    }
    nlohmann::json outputs_json = nlohmann::json::array();
    for (const auto& p : outputs) {
        const auto full = p.is_absolute() ? p : out_dir / p;
        outputs_json.push_back({{"file", std::filesystem::relative(full, out_dir).generic_string()}, {"sha256", file_sha256(full)}});
    }
    const nlohmann::json doc = {{"subcommand", subcommand},
                                {"config", config},
                                {"seed", seed},
                                {"tool_version", tool_version.empty() ? radsens::tool_version() : tool_version},
                                {"inputs", std::move(inputs_json)},
                                {"outputs", std::move(outputs_json)}};
    const auto target = out_dir / "manifest.json";
    std::ofstream out(target);
    if (!out) {
        throw IoError("cannot write " + target.string());
    }
    out << doc.dump(2) << '\n';
    return target;
}

} // namespace radsens
