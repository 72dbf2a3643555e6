#include "radsens/config.hpp"
#include "radsens/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace radsens {

namespace {

namespace pt = boost::property_tree;

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

class Reader {
public:
    Reader(std::string source, std::string key, std::string value)
        : source_(std::move(source)), key_(std::move(key)), value_(trimmed(value)) {}

    template<typename T>
    T integer() const {
        T out{};
        const auto [ptr, ec] = std::from_chars(value_.data(), value_.data() + value_.size(), out);
        if (ec != std::errc() || ptr != value_.data() + value_.size() || value_.empty()) {
            fail("an integer");
        }
        return out;
    }

    double real() const {
        double out = 0;
        const auto [ptr, ec] = std::from_chars(value_.data(), value_.data() + value_.size(), out);
        if (ec != std::errc() || ptr != value_.data() + value_.size() || value_.empty()) {
            fail("a real number");
        }
        return out;
    }

    bool boolean() const {
        if (value_ == "true" || value_ == "1" || value_ == "yes") {
            return true;
        }
        if (value_ == "false" || value_ == "0" || value_ == "no") {
            return false;
        }
        fail("a boolean");
        return false;
    }

    std::vector<double> real_list() const {
        std::vector<double> out;
        std::stringstream stream(value_);
        std::string item;
        while (std::getline(stream, item, ',')) {
            out.push_back(Reader(source_, key_, item).real());
        }
        if (out.empty()) {
            fail("a comma-separated list of reals");
        }
        return out;
    }

private:
    [[noreturn]] void fail(const char* expected) const {
        throw ValidationError(source_ + ": key '" + key_ + "' expects " + expected + ", got '" + value_ + "'");
    }

    std::string source_;
    std::string key_;
    std::string value_;
};

void apply(ConfigBundle& cfg, const std::string& section, const std::string& key, const Reader& value, const std::string& source) {
    const std::string full = section.empty() ? key : section + "." + key;
    if (section.empty()) {
        if (key == "seed") return void(cfg.seed = value.integer<std::uint64_t>());
        if (key == "jobs") return void(cfg.jobs = value.integer<int>());
    } else if (section == "preprocess") {
        if (key == "max_missing") return void(cfg.preprocess.max_missing = value.integer<int>());
        if (key == "redundancy_threshold") return void(cfg.preprocess.redundancy_threshold = value.real());
        if (key == "sort_genes") return void(cfg.preprocess.sort_genes = value.boolean());
    } else if (section == "lasso") {
        if (key == "max_iter") return void(cfg.selection.lasso.max_iter = value.integer<int>());
        if (key == "tol") return void(cfg.selection.lasso.tol = value.real());
        if (key == "lambda_bisection_steps") return void(cfg.selection.lasso.lambda_bisection_steps = value.integer<int>());
        if (key == "target_support") return void(cfg.selection.support_k = value.integer<int>());
    } else if (section == "selection") {
        if (key == "folds") return void(cfg.selection.folds = value.integer<int>());
        if (key == "repeats") return void(cfg.selection.repeats = value.integer<int>());
        if (key == "support_k") return void(cfg.selection.support_k = value.integer<int>());
        if (key == "top_per_iter") return void(cfg.selection.top_per_iter = value.integer<int>());
        if (key == "final_count") return void(cfg.selection.final_count = value.integer<int>());
    } else if (section == "svr") {
        if (key == "C") return void(cfg.fixed_C = value.real());
        if (key == "epsilon") return void(cfg.evaluate.svr.epsilon = value.real());
        if (key == "tol") return void(cfg.evaluate.svr.tol = value.real());
        if (key == "max_iter") return void(cfg.evaluate.svr.max_iter = value.integer<long>());
        if (key == "c_grid") return void(cfg.evaluate.c_grid = value.real_list());
        if (key == "inner_folds") return void(cfg.evaluate.inner_folds = value.integer<int>());
    } else if (section == "evaluate") {
        if (key == "folds") return void(cfg.evaluate.folds = value.integer<int>());
        if (key == "repeats") return void(cfg.evaluate.repeats = value.integer<int>());
        if (key == "max_count") return void(cfg.max_count = value.integer<int>());
        if (key == "global_grid_search") return void(cfg.evaluate.global_grid_search = value.boolean());
        if (key == "reuse_selection_folds") return void(cfg.evaluate.reuse_selection_folds = value.boolean());
    } else {
        throw ValidationError(source + ": unknown section '" + section + "'");
    }
    throw ValidationError(source + ": unknown key '" + full + "'");
}

} // namespace

void ConfigBundle::finalize(std::uint64_t effective_seed) {
    seed = effective_seed;
    selection.seed = effective_seed;
    evaluate.seed = effective_seed;
    selection.jobs = jobs;
    evaluate.jobs = jobs;
    selection.lasso.target_support = selection.support_k;
    if (jobs < 1) {
        throw ValidationError("jobs must be >= 1");
    }
    if (max_count < 1) {
        throw ValidationError("evaluate.max_count must be >= 1");
    }
    if (fixed_C && !(*fixed_C > 0)) {
        throw ValidationError("svr.C must be > 0");
    }
    preprocess.validate();
    selection.validate();
    evaluate.validate();
}

nlohmann::json ConfigBundle::to_json() const {
    nlohmann::json grid = nlohmann::json::array();
    for (double c : evaluate.c_grid) {
        grid.push_back(real_json(c));
    }
    return {
        {"seed", seed.value_or(0)},
        {"jobs", jobs},
        {"preprocess",
         {{"max_missing", preprocess.max_missing},
          {"redundancy_threshold", real_json(preprocess.redundancy_threshold)},
          {"sort_genes", preprocess.sort_genes}}},
        {"lasso",
         {{"max_iter", selection.lasso.max_iter},
          {"tol", real_json(selection.lasso.tol)},
          {"lambda_bisection_steps", selection.lasso.lambda_bisection_steps}}},
        {"selection",
         {{"folds", selection.folds},
          {"repeats", selection.repeats},
          {"support_k", selection.support_k},
          {"top_per_iter", selection.top_per_iter},
          {"final_count", selection.final_count}}},
        {"svr",
         {{"C", fixed_C ? real_json(*fixed_C) : nlohmann::json("auto")},
          {"epsilon", real_json(evaluate.svr.epsilon)},
          {"tol", real_json(evaluate.svr.tol)},
          {"max_iter", evaluate.svr.max_iter},
          {"c_grid", std::move(grid)},
          {"inner_folds", evaluate.inner_folds}}},
        {"evaluate",
         {{"folds", evaluate.folds},
          {"repeats", evaluate.repeats},
          {"max_count", max_count},
          {"global_grid_search", evaluate.global_grid_search},
          {"reuse_selection_folds", evaluate.reuse_selection_folds}}},
    };
}

ConfigBundle parse_config(std::string_view text, std::string_view source) {
    pt::ptree tree;
    std::istringstream stream{std::string(text)};
    try {
        pt::read_ini(stream, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(std::string(source) + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    ConfigBundle cfg;
    const std::string src(source);
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            apply(cfg, "", name, Reader(src, name, node.data()), src);
            continue;
        }
        for (const auto& [key, leaf] : node) {
            apply(cfg, name, key, Reader(src, name + "." + key, leaf.data()), src);
        }
    }
    return cfg;
}

ConfigBundle load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

} // namespace radsens
