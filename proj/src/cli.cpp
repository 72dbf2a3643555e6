#include "radsens/cli.hpp"
#include "radsens/analysis.hpp"
#include "radsens/config.hpp"
#include "radsens/error.hpp"
#include "radsens/manifest.hpp"
#include "radsens/matrixio.hpp"
#include "radsens/rng.hpp"
#include "radsens/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace radsens::cli {

namespace {

namespace fs = std::filesystem;

/// Everything any subcommand can be given; each subcommand registers the subset it reads.
struct Options {
    std::string out;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;

    std::string input;
    std::string omic = "transcriptome";
    std::string genes;
    std::string matrix;
    std::string labels;
    std::string transcriptome;
    std::string proteome;
    std::string orientation = "samples_as_rows";

    std::optional<int> max_missing;
    std::optional<double> redundancy_threshold;
    bool sort_genes = false;

    bool dump_lasso_trace = false;
    std::optional<std::string> C;
    std::optional<double> epsilon;
    bool sweep = false;
    std::optional<int> max_count;
    bool global_grid_search = false;
    bool reuse_selection_folds = false;

    std::string source = "transcriptome";
    std::string target = "proteome";

    double r_gene = 0.4;
    double r_label = 0.2;
    std::string curve;

    std::string preset;
    std::optional<double> cross_omic_rho;
    std::optional<double> missing_rate;
};

std::uint64_t parse_seed(std::string_view text, std::string_view origin) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(std::string(origin) + " is not a valid seed: '" + std::string(text) + "'");
    }
    return value;
}

/// Flag beats config file beats RADSENS_SEED beats zero.
std::uint64_t resolve_seed(const Options& opt, const ConfigBundle& cfg) {
    if (opt.seed) {
        return *opt.seed;
    }
    if (cfg.seed) {
        return *cfg.seed;
    }
    if (const char* env = std::getenv("RADSENS_SEED"); env != nullptr && *env != '\0') {
        return parse_seed(env, "RADSENS_SEED");
    }
    return 0;
}

ConfigBundle build_config(const Options& opt) {
    ConfigBundle cfg = opt.config.empty() ? ConfigBundle{} : load_config(opt.config);
    if (opt.jobs) cfg.jobs = *opt.jobs;
    if (opt.max_missing) cfg.preprocess.max_missing = *opt.max_missing;
    if (opt.redundancy_threshold) cfg.preprocess.redundancy_threshold = *opt.redundancy_threshold;
    if (opt.sort_genes) cfg.preprocess.sort_genes = true;
    if (opt.epsilon) cfg.evaluate.svr.epsilon = *opt.epsilon;
    if (opt.max_count) cfg.max_count = *opt.max_count;
    if (opt.global_grid_search) cfg.evaluate.global_grid_search = true;
    if (opt.reuse_selection_folds) cfg.evaluate.reuse_selection_folds = true;
    if (opt.dump_lasso_trace) cfg.selection.keep_traces = true;
    if (opt.C) {
        if (*opt.C == "auto") {
            cfg.fixed_C.reset();
        } else {
            double value = 0;
            const auto& s = *opt.C;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw ValidationError("--C expects a positive real or 'auto', got '" + s + "'");
            }
            cfg.fixed_C = value;
        }
    }
    cfg.finalize(resolve_seed(opt, cfg));
    return cfg;
}

/// Collects outputs of one invocation and writes the manifest that lists them.
class Run {
public:
    Run(std::string subcommand, const fs::path& out, const ConfigBundle& cfg, nlohmann::json arguments)
        : out_(out), cfg_(cfg) {
        manifest_.subcommand = std::move(subcommand);
        manifest_.seed = cfg.seed.value_or(0);
        manifest_.tool_version = tool_version();
        manifest_.config = cfg.to_json();
        manifest_.config["arguments"] = std::move(arguments);
        fs::create_directories(out_);
    }

    const ConfigBundle& config() const { return cfg_; }
    const fs::path& out() const { return out_; }

    void input(const fs::path& path) {
        if (!fs::exists(path)) {
            throw IoError("input file not found: " + path.string());
        }
        manifest_.inputs.push_back(path);
    }

    void report(const Report& report, const std::string& stem) {
        write_report(report, place(stem + ".json"), ReportFormat::json);
        write_report(report, place(stem + ".csv"), ReportFormat::csv);
    }

    fs::path matrix(const ExpressionMatrix& m, const std::string& name) {
        const auto path = place(name);
        write_expression_matrix(m, path);
        return path;
    }

    fs::path labels(const AlignedDataset& ds, const std::string& name) {
        const auto path = place(name);
        write_labels(ds, path);
        return path;
    }

    fs::path finish() { return manifest_.write(out_); }

private:
    fs::path place(const std::string& relative) {
        const auto path = out_ / relative;
        fs::create_directories(path.parent_path());
        if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), fs::path(relative)) == manifest_.outputs.end()) {
            manifest_.outputs.emplace_back(relative);
        }
        return path;
    }

    fs::path out_;
    ConfigBundle cfg_;
    RunManifest manifest_;
};

std::string dataset_stem(Omic omic) { return std::string(to_string(omic)); }

AlignedDataset load_dataset(const fs::path& dir, Omic omic, Run& run) {
    const auto matrix_path = dir / (dataset_stem(omic) + "_matrix.tsv");
    const auto labels_path = dir / (dataset_stem(omic) + "_labels.tsv");
    run.input(matrix_path);
    run.input(labels_path);
    return match_samples(read_expression_matrix(matrix_path, Orientation::samples_as_rows), read_labels(labels_path), omic);
}

std::vector<std::string> load_genes(const std::string& path, Run& run) {
    if (path.empty()) {
        throw ValidationError("--genes FILE is required");
    }
    run.input(path);
    return read_gene_list(path);
}

FeatureRanking ranking_from_list(const std::vector<std::string>& genes) {
    FeatureRanking ranking;
    for (const auto& g : genes) {
        ranking.entries.push_back({g, 0.0, 0, 0.0});
    }
    return ranking;
}

CvOptions eval_options(const ConfigBundle& cfg) { return cfg.evaluate; }

struct Prepared {
    std::map<Omic, AlignedDataset> sets;
};

/// Clean each omic over its labelled samples, intersect genes, z-score per omic, then merge.
Prepared prepare(const std::optional<ExpressionMatrix>& t, const std::optional<ExpressionMatrix>& p, const LabelTable& labels,
                 const PreprocessConfig& cfg, Run& run, const std::string& dir) {
    std::map<Omic, ExpressionMatrix> cleaned;
    std::map<Omic, Eigen::VectorXd> label_vectors;
    auto stage = [&](const ExpressionMatrix& raw, Omic omic) {
        auto ds = match_samples(raw, labels, omic);
        auto [m, log] = clean(ds.matrix, cfg);
        run.report(to_report(log), dir + dataset_stem(omic) + "_preprocess_log");
        cleaned[omic] = std::move(m);
        label_vectors[omic] = ds.labels;
    };
    if (t) stage(*t, Omic::transcriptome);
    if (p) stage(*p, Omic::proteome);
    if (cleaned.empty()) {
        throw ValidationError("no expression matrix given");
    }
    if (cleaned.size() == 2) {
        auto [a, b] = intersect_genes(cleaned[Omic::transcriptome], cleaned[Omic::proteome]);
        cleaned[Omic::transcriptome] = std::move(a);
        cleaned[Omic::proteome] = std::move(b);
    }

    Prepared out;
    for (auto& [omic, m] : cleaned) {
        AlignedDataset ds{zscore(m), label_vectors[omic], omic};
        run.matrix(ds.matrix, dir + dataset_stem(omic) + "_matrix.tsv");
        run.labels(ds, dir + dataset_stem(omic) + "_labels.tsv");
        out.sets.emplace(omic, std::move(ds));
    }
    if (out.sets.size() == 2) {
        auto combined = merge_omics(out.sets.at(Omic::transcriptome), out.sets.at(Omic::proteome));
        run.matrix(combined.matrix, dir + "combined_matrix.tsv");
        run.labels(combined, dir + "combined_labels.tsv");
        out.sets.emplace(Omic::combined, std::move(combined));
    }
    return out;
}

/// Restricts two datasets to their shared samples.
std::pair<AlignedDataset, AlignedDataset> shared_samples(const AlignedDataset& t, const AlignedDataset& p) {
    std::vector<std::string> common;
    std::set<std::string> in_p(p.matrix.sample_ids.begin(), p.matrix.sample_ids.end());
    for (const auto& s : t.matrix.sample_ids) {
        if (in_p.count(s) != 0) {
            common.push_back(s);
        }
    }
    if (common.empty()) {
        throw ValidationError("transcriptome and proteome share no samples");
    }
    std::sort(common.begin(), common.end());
    return {restrict_samples(t, common), restrict_samples(p, common)};
}

void analyze_panel(const AlignedDataset& ds, std::span<const std::string> genes, Run& run, const std::string& prefix) {
    run.report(to_report(gene_label_correlations(ds, genes)), prefix + "correlations");
    run.report(to_report(vif(ds, genes)), prefix + "vif");
    run.report(to_report(pairwise_heatmap_stats(ds, genes)), prefix + "heatmap");
    run.report(to_report(substitution_candidates(ds, genes)), prefix + "substitutes");
}

ExpressionMatrix read_matrix_input(const std::string& path, const Options& opt, Run& run) {
    run.input(path);
    return read_expression_matrix(path, parse_orientation(opt.orientation));
}

// ---- subcommands

void cmd_ingest(const Options& opt) {
    const auto cfg = build_config(opt);
    const Omic omic = parse_omic(opt.omic);
    Run run("ingest", opt.out, cfg, {{"omic", opt.omic}, {"orientation", opt.orientation}});
    const auto m = read_matrix_input(opt.matrix, opt, run);
    run.input(opt.labels);
    const auto ds = match_samples(m, read_labels(opt.labels), omic);
    run.matrix(ds.matrix, dataset_stem(omic) + "_matrix.tsv");
    run.labels(ds, dataset_stem(omic) + "_labels.tsv");
    Report summary;
    summary.kind = "ingest_summary";
    const long long missing = ds.matrix.missing.size() > 0 ? static_cast<long long>(ds.matrix.missing.count()) : 0;
    summary.body = {{"omic", opt.omic}, {"samples", ds.matrix.n_samples()}, {"genes", ds.matrix.n_genes()}, {"missing_cells", missing}};
    summary.table.header = {"omic", "samples", "genes", "missing_cells"};
    summary.table.rows.push_back({opt.omic, static_cast<long long>(ds.matrix.n_samples()), static_cast<long long>(ds.matrix.n_genes()), missing});
    run.report(summary, "ingest_summary");
    run.finish();
}

void cmd_preprocess(const Options& opt) {
    const auto cfg = build_config(opt);
    Run run("preprocess", opt.out, cfg, {{"orientation", opt.orientation}});
    std::optional<ExpressionMatrix> t;
    std::optional<ExpressionMatrix> p;
    if (!opt.transcriptome.empty()) t = read_matrix_input(opt.transcriptome, opt, run);
    if (!opt.proteome.empty()) p = read_matrix_input(opt.proteome, opt, run);
    run.input(opt.labels);
    prepare(t, p, read_labels(opt.labels), cfg.preprocess, run, "");
    run.finish();
}

void cmd_select(const Options& opt) {
    const auto cfg = build_config(opt);
    const Omic omic = parse_omic(opt.omic);
    Run run("select", opt.out, cfg, {{"omic", opt.omic}});
    const auto ds = load_dataset(opt.input, omic, run);
    const auto ranking = select_features(ds, cfg.selection);
    run.report(to_report(ranking), "ranking");
    if (cfg.selection.keep_traces) {
        run.report(lasso_trace_report(ranking), "lasso_trace");
    }
    run.finish();
}

void cmd_train(const Options& opt) {
    const auto cfg = build_config(opt);
    const Omic omic = parse_omic(opt.omic);
    Run run("train", opt.out, cfg, {{"omic", opt.omic}});
    const auto ds = load_dataset(opt.input, omic, run);
    const auto genes = load_genes(opt.genes, run);
    const Eigen::MatrixXd X = ds.features(genes);
    SvrConfig svr = cfg.evaluate.svr;
    if (cfg.fixed_C) {
        svr.C = *cfg.fixed_C;
    } else {
        const auto grid = grid_search_C(X, ds.labels, cfg.evaluate.c_grid, cfg.evaluate.inner_folds,
                                        derive_seed(*cfg.seed, streams::grid_search), svr);
        run.report(to_report(grid), "grid_search");
        svr.C = grid.best_C;
    }
    const auto model = svr_train(X, ds.labels, svr);
    run.report(to_report(model, genes), "model");
    run.report(to_report(compute_metrics(ds.labels, svr_predict(model, X)), "training_fit"), "training_fit");
    run.finish();
}

void cmd_evaluate(const Options& opt) {
    const auto cfg = build_config(opt);
    const Omic omic = parse_omic(opt.omic);
    Run run("evaluate", opt.out, cfg, {{"omic", opt.omic}, {"sweep", opt.sweep}});
    const auto ds = load_dataset(opt.input, omic, run);
    const auto genes = load_genes(opt.genes, run);
    if (opt.sweep) {
        const int count = std::min(cfg.max_count, static_cast<int>(genes.size()));
        run.report(to_report(sweep_gene_count(ds, ranking_from_list(genes), count, eval_options(cfg))), "sweep");
    } else {
        run.report(to_report(cross_validate(ds, genes, eval_options(cfg))), "cv_report");
    }
    run.finish();
}

void cmd_cross_eval(const Options& opt) {
    const auto cfg = build_config(opt);
    const Omic source = parse_omic(opt.source);
    const Omic target = parse_omic(opt.target);
    Run run("cross-eval", opt.out, cfg, {{"source", opt.source}, {"target", opt.target}});
    const auto src = load_dataset(opt.input, source, run);
    const auto dst = load_dataset(opt.input, target, run);
    const auto genes = load_genes(opt.genes, run);
    run.report(to_report(cross_evaluate(src, dst, genes, eval_options(cfg)), "cross_evaluation"), "cross_eval");
    run.finish();
}

std::vector<std::pair<double, double>> read_curve(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t,") == std::string::npos) continue;
        const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
        std::vector<double> values;
        std::stringstream fields(line);
        std::string field;
        bool numeric = true;
        while (std::getline(fields, field, delim)) {
            double v = 0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            numeric = numeric && ec == std::errc() && ptr == field.data() + field.size();
            values.push_back(v);
        }
        if (!numeric) {
            if (rows.empty() && line_no == 1) continue;
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " is not numeric");
        }
        if (values.size() != 2 && values.size() != 3) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " needs dose,sf or dose,colonies,plated");
        }
        if (!rows.empty() && rows.front().size() != values.size()) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) + " has a different column count");
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) {
        throw ValidationError(path.string() + ": survival curve is empty");
    }
    std::vector<std::pair<double, double>> curve;
    if (rows.front().size() == 2) {
        for (const auto& r : rows) curve.emplace_back(r[0], r[1]);
        return curve;
    }
    // Colony counts: plating efficiency from the unirradiated wells, pooled.
    double control_colonies = 0;
    double control_plated = 0;
    for (const auto& r : rows) {
        if (r[0] == 0) {
            control_colonies += r[1];
            control_plated += r[2];
        }
    }
    if (control_plated <= 0) {
        throw ValidationError(path.string() + ": colony counts need at least one dose-0 control row");
    }
    const double pe = plating_efficiency(control_colonies, control_plated);
    for (const auto& r : rows) curve.emplace_back(r[0], clonogenic_sf(r[1], r[2], pe));
    return curve;
}

void cmd_analyze(const std::string& what, const Options& opt) {
    const auto cfg = build_config(opt);
    Run run("analyze " + what, opt.out, cfg, {{"analysis", what}, {"omic", opt.omic}});
    if (what == "lq") {
        if (opt.curve.empty()) {
            throw ValidationError("--curve FILE is required");
        }
        run.input(opt.curve);
        const auto curve = read_curve(opt.curve);
        std::vector<double> doses;
        std::vector<double> sf;
        for (const auto& [d, s] : curve) {
            doses.push_back(d);
            sf.push_back(s);
        }
        run.report(to_report(lq_fit(doses, sf)), "lq_fit");
    } else if (what == "concordance") {
        const auto t = load_dataset(opt.input, Omic::transcriptome, run);
        const auto p = load_dataset(opt.input, Omic::proteome, run);
        const auto [ts, ps] = shared_samples(t, p);
        run.report(to_report(rna_protein_concordance(ts, ps)), "concordance");
    } else {
        const auto ds = load_dataset(opt.input, parse_omic(opt.omic), run);
        const auto genes = load_genes(opt.genes, run);
        if (what == "correlations") {
            run.report(to_report(gene_label_correlations(ds, genes)), "correlations");
        } else if (what == "substitutes") {
            run.report(to_report(substitution_candidates(ds, genes, opt.r_gene, opt.r_label)), "substitutes");
        } else if (what == "vif") {
            run.report(to_report(vif(ds, genes)), "vif");
        } else {
            run.report(to_report(pairwise_heatmap_stats(ds, genes)), "heatmap");
        }
    }
    run.finish();
}

SynthConfig synth_config(const Options& opt, std::uint64_t seed) {
    auto cfg = synth_preset(opt.preset, seed);
    if (opt.cross_omic_rho) cfg.cross_omic_rho = *opt.cross_omic_rho;
    if (opt.missing_rate) cfg.missing_rate = *opt.missing_rate;
    cfg.validate();
    return cfg;
}

void write_synth(const SynthData& data, Run& run, const std::string& dir) {
    run.matrix(data.a.matrix, dir + "transcriptome.tsv");
    run.matrix(data.b.matrix, dir + "proteome.tsv");
    run.labels(data.a, dir + "labels.tsv");
    run.report(to_report(data.truth), dir + "truth");
}

void cmd_synth(const Options& opt) {
    const auto cfg = build_config(opt);
    const auto synth = synth_config(opt, *cfg.seed);
    Run run("synth", opt.out, cfg, {{"preset", opt.preset}, {"cross_omic_rho", real_json(synth.cross_omic_rho)},
                                     {"missing_rate", real_json(synth.missing_rate)}});
    write_synth(generate(synth), run, "");
    run.finish();
}

void cmd_pipeline(const Options& opt) {
    const auto cfg = build_config(opt);
    std::vector<Omic> targets;
    if (opt.omic == "all") {
        targets = {Omic::transcriptome, Omic::proteome, Omic::combined};
    } else {
        targets = {parse_omic(opt.omic)};
    }
    nlohmann::json args = {{"omic", opt.omic}};
    if (!opt.preset.empty()) args["preset"] = opt.preset;
    Run run("pipeline", opt.out, cfg, std::move(args));

    std::optional<ExpressionMatrix> t;
    std::optional<ExpressionMatrix> p;
    LabelTable labels;
    if (!opt.preset.empty()) {
        const auto synth = synth_config(opt, *cfg.seed);
        auto data = generate(synth);
        write_synth(data, run, "data/");
        t = std::move(data.a.matrix);
        p = std::move(data.b.matrix);
        labels = std::move(data.labels);
    } else {
        if (!opt.transcriptome.empty()) t = read_matrix_input(opt.transcriptome, opt, run);
        if (!opt.proteome.empty()) p = read_matrix_input(opt.proteome, opt, run);
        if (opt.labels.empty()) {
            throw ValidationError("--labels FILE is required without --preset");
        }
        run.input(opt.labels);
        labels = read_labels(opt.labels);
    }
    const auto prepared = prepare(t, p, labels, cfg.preprocess, run, "preprocess/");
    const auto& sets = prepared.sets;
    auto require = [&](Omic omic) -> const AlignedDataset& {
        const auto it = sets.find(omic);
        if (it == sets.end()) {
            throw ValidationError("pipeline for " + std::string(to_string(omic)) + " needs the " +
                                  (omic == Omic::combined ? std::string("transcriptome and proteome") : std::string(to_string(omic))) +
                                  " matrix");
        }
        return it->second;
    };

    if (sets.count(Omic::transcriptome) != 0 && sets.count(Omic::proteome) != 0) {
        const auto [ts, ps] = shared_samples(sets.at(Omic::transcriptome), sets.at(Omic::proteome));
        run.report(to_report(rna_protein_concordance(ts, ps)), "analysis/concordance");
    }

    const CvOptions cv = eval_options(cfg);
    for (const Omic omic : targets) {
        const std::string dir = dataset_stem(omic) + "/";
        const auto ranking = select_features(require(omic), cfg.selection);
        run.report(to_report(ranking), dir + "ranking");
        if (cfg.selection.keep_traces) {
            run.report(lasso_trace_report(ranking), dir + "lasso_trace");
        }
        const int count = std::min(cfg.max_count, static_cast<int>(ranking.entries.size()));
        const auto genes = ranking.gene_ids(static_cast<std::size_t>(count));

        // A combined panel is judged on each single-omic dataset; a single-omic panel on its own data.
        std::vector<Omic> eval_sets;
        if (omic == Omic::combined) {
            eval_sets = {Omic::transcriptome, Omic::proteome};
        } else {
            eval_sets = {omic};
        }
        SweepReport sweep;
        for (const Omic e : eval_sets) {
            const auto part = sweep_gene_count(require(e), ranking, count, cv, to_string(e));
            sweep.rows.insert(sweep.rows.end(), part.rows.begin(), part.rows.end());
            analyze_panel(require(e), genes, run, dir + "analysis/" + dataset_stem(e) + "_");
        }
        run.report(to_report(sweep), dir + "sweep");

        if (omic != Omic::combined) {
            const Omic other = omic == Omic::transcriptome ? Omic::proteome : Omic::transcriptome;
            if (sets.count(other) != 0) {
                run.report(to_report(cross_evaluate(sets.at(omic), sets.at(other), genes, cv), "cross_evaluation"),
                           dir + "cross_eval_" + dataset_stem(other));
            }
        }
    }
    run.finish();
}

// ---- argument wiring

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--out", opt.out, "Output directory")->required();
    cmd->add_option("--config", opt.config, "INI config file");
    cmd->add_option("--seed", opt.seed, "Random seed (overrides config and RADSENS_SEED)");
    cmd->add_option("--jobs", opt.jobs, "Worker threads for CV iterations");
}

void add_input(CLI::App* cmd, Options& opt) {
    cmd->add_option("--input", opt.input, "Directory holding <omic>_matrix.tsv and <omic>_labels.tsv")->required();
}

void add_eval_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--epsilon", opt.epsilon, "SVR tube width");
    cmd->add_flag("--global-grid-search", opt.global_grid_search, "Pick C once on the full data");
    cmd->add_flag("--reuse-selection-folds", opt.reuse_selection_folds, "Evaluate on the selection fold partition");
}

void add_preprocess_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--max-missing", opt.max_missing, "Drop genes with more missing values than this");
    cmd->add_option("--redundancy-threshold", opt.redundancy_threshold, "Absolute correlation that marks a gene redundant");
    cmd->add_flag("--sort-genes", opt.sort_genes, "Sort genes by id before pruning");
    cmd->add_option("--orientation", opt.orientation, "samples_as_rows or genes_as_rows");
}

std::string one_line(std::string message) {
    std::replace(message.begin(), message.end(), '\n', ' ');
    return message;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radiation-response prediction from transcriptome and proteome data", "radsens"};
    app.require_subcommand(1);
    Options opt;
    std::function<void()> action;

    auto* ingest = app.add_subcommand("ingest", "Align one expression matrix with SF2 labels");
    add_common(ingest, opt);
    ingest->add_option("--matrix", opt.matrix, "Expression matrix file")->required();
    ingest->add_option("--labels", opt.labels, "SF2 label file")->required();
    ingest->add_option("--omic", opt.omic, "transcriptome, proteome or combined");
    ingest->add_option("--orientation", opt.orientation, "samples_as_rows or genes_as_rows");
    ingest->callback([&] { action = [&] { cmd_ingest(opt); }; });

    auto* preprocess = app.add_subcommand("preprocess", "Clean, intersect, z-score and merge omics");
    add_common(preprocess, opt);
    add_preprocess_flags(preprocess, opt);
    preprocess->add_option("--transcriptome", opt.transcriptome, "Transcriptome matrix file");
    preprocess->add_option("--proteome", opt.proteome, "Proteome matrix file");
    preprocess->add_option("--labels", opt.labels, "SF2 label file")->required();
    preprocess->callback([&] { action = [&] { cmd_preprocess(opt); }; });

    auto* select = app.add_subcommand("select", "Frequency-ranked Lasso feature selection");
    add_common(select, opt);
    add_input(select, opt);
    select->add_option("--omic", opt.omic, "transcriptome, proteome or combined");
    select->add_flag("--dump-lasso-trace", opt.dump_lasso_trace, "Write the lambda bisection trace");
    select->callback([&] { action = [&] { cmd_select(opt); }; });

    auto* train = app.add_subcommand("train", "Fit a linear SVR on a gene panel");
    add_common(train, opt);
    add_input(train, opt);
    train->add_option("--omic", opt.omic, "transcriptome, proteome or combined");
    train->add_option("--genes", opt.genes, "Gene list or ranking file")->required();
    train->add_option("--C", opt.C, "Penalty C, or 'auto' for grid search");
    train->add_option("--epsilon", opt.epsilon, "SVR tube width");
    train->callback([&] { action = [&] { cmd_train(opt); }; });

    auto* evaluate = app.add_subcommand("evaluate", "Repeated cross-validation of a gene panel");
    add_common(evaluate, opt);
    add_input(evaluate, opt);
    add_eval_flags(evaluate, opt);
    evaluate->add_option("--omic", opt.omic, "transcriptome, proteome or combined");
    evaluate->add_option("--genes", opt.genes, "Gene list or ranking file")->required();
    evaluate->add_flag("--sweep", opt.sweep, "Evaluate the top 1..max-count genes");
    evaluate->add_option("--max-count", opt.max_count, "Largest panel size in a sweep");
    evaluate->callback([&] { action = [&] { cmd_evaluate(opt); }; });

    auto* cross = app.add_subcommand("cross-eval", "Train on one omic, test on another");
    add_common(cross, opt);
    add_input(cross, opt);
    add_eval_flags(cross, opt);
    cross->add_option("--source", opt.source, "Training omic");
    cross->add_option("--target", opt.target, "Test omic");
    cross->add_option("--genes", opt.genes, "Gene list or ranking file")->required();
    cross->callback([&] { action = [&] { cmd_cross_eval(opt); }; });

    auto* analyze = app.add_subcommand("analyze", "Correlation and diagnostic reports");
    analyze->require_subcommand(1);
    for (const char* name : {"concordance", "correlations", "substitutes", "vif", "heatmap", "lq"}) {
        auto* sub = analyze->add_subcommand(name);
        add_common(sub, opt);
        const std::string what = name;
        if (what == "lq") {
            sub->add_option("--curve", opt.curve, "dose,sf or dose,colonies,plated table")->required();
        } else {
            add_input(sub, opt);
        }
        if (what != "lq" && what != "concordance") {
            sub->add_option("--omic", opt.omic, "transcriptome, proteome or combined");
            sub->add_option("--genes", opt.genes, "Gene list or ranking file")->required();
        }
        if (what == "substitutes") {
            sub->add_option("--r-gene", opt.r_gene, "Minimum |r| to the selected gene");
            sub->add_option("--r-label", opt.r_label, "Minimum |r| to SF2");
        }
        sub->callback([&, what] { action = [&, what] { cmd_analyze(what, opt); }; });
    }

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    add_common(synth, opt);
    synth->add_option("--preset", opt.preset, "recovery, concordance or tiny-qp")->required();
    synth->add_option("--cross-omic-rho", opt.cross_omic_rho, "Correlation between the two omics");
    synth->add_option("--missing-rate", opt.missing_rate, "Fraction of cells to blank out");
    synth->callback([&] { action = [&] { cmd_synth(opt); }; });

    auto* pipeline = app.add_subcommand("pipeline", "preprocess, select, sweep and analyze in one run");
    add_common(pipeline, opt);
    add_preprocess_flags(pipeline, opt);
    add_eval_flags(pipeline, opt);
    pipeline->add_option("--omic", opt.omic, "transcriptome, proteome, combined or all");
    pipeline->add_option("--preset", opt.preset, "Generate inputs from a synthetic preset");
    pipeline->add_option("--cross-omic-rho", opt.cross_omic_rho, "Preset override");
    pipeline->add_option("--missing-rate", opt.missing_rate, "Preset override");
    pipeline->add_option("--transcriptome", opt.transcriptome, "Transcriptome matrix file");
    pipeline->add_option("--proteome", opt.proteome, "Proteome matrix file");
    pipeline->add_option("--labels", opt.labels, "SF2 label file");
    pipeline->add_option("--max-count", opt.max_count, "Largest panel size in the sweep");
    pipeline->add_flag("--dump-lasso-trace", opt.dump_lasso_trace, "Write the lambda bisection trace");
    pipeline->callback([&] { action = [&] { cmd_pipeline(opt); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << one_line(e.what()) << '\n' << app.help();
        return invalid;
    }

    try {
        if (action) {
            action();
        }
        return ok;
    } catch (const Error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return invalid;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return invalid;
    } catch (const std::exception& e) {
        err << "internal error: " << one_line(e.what()) << '\n';
        return internal;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

} // namespace radsens::cli
