// Command-line pipeline: extract | evaluate | uncertainty | report.
// Exit codes: 0 success, 1 evaluation failure, 2 input/format error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uqlearn/errors.hpp"
#include "uqlearn/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string seed;
    std::string jobs;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "configuration file (key = value sections)");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "base seed (unsigned 64-bit)");
    cmd->add_option("--jobs", flags.jobs, "worker count");
}

// Config file first, command-line overrides second: flags win.
uqlearn::PipelineConfig build_config(const CommonFlags& common, const uqlearn::KvMap& overrides) {
    uqlearn::KvMap kv;
    if (!common.config_path.empty()) kv = uqlearn::parse_config_file(common.config_path);
    for (const auto& [key, value] : overrides) kv[key] = value;
    if (!common.out_dir.empty()) kv["output.dir"] = common.out_dir;
    if (!common.seed.empty()) kv["output.seed"] = common.seed;
    if (!common.jobs.empty()) kv["output.jobs"] = common.jobs;
    return uqlearn::pipeline_config_from_kv(kv);
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (const std::string& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transfer-feature classification and ensemble uncertainty pipeline"};
    app.require_subcommand(1);

    // ---- extract ----
    CLI::App* extract = app.add_subcommand("extract", "run the frozen-weight feature extractor");
    CommonFlags extract_common;
    add_common(extract, extract_common);
    std::string images, arch, weights;
    std::string weights_seed;
    extract->add_option("--images", images, "manifest file: image_path,label per line")
        ->required();
    extract->add_option("--arch", arch, "architecture preset name or spec file")->required();
    extract->add_option("--weights", weights, "FZWT weight container");
    extract->add_option("--weights-seed", weights_seed,
                        "synthesize seeded random weights instead of loading a file");

    // ---- evaluate ----
    CLI::App* evaluate = app.add_subcommand("evaluate", "repeated-run evaluation protocol");
    CommonFlags eval_common;
    add_common(evaluate, eval_common);
    std::string synth_spec, classifiers, runs, test_fraction, stratified;
    std::vector<std::string> feature_args;
    auto add_source_flags = [&](CLI::App* cmd) {
        cmd->add_option("--synth", synth_spec, "synthetic source: n_pos,n_neg,dim,separation");
        cmd->add_option("--features", feature_args, "feature csv source as name=path");
    };
    add_source_flags(evaluate);
    evaluate->add_option("--classifiers", classifiers, "comma-separated classifier kinds");
    evaluate->add_option("--runs", runs, "number of repetitions");
    evaluate->add_option("--test-fraction", test_fraction, "hold-out fraction per run");
    evaluate->add_option("--stratified", stratified, "stratified splits (0/1)");

    // ---- uncertainty ----
    CLI::App* uncertainty = app.add_subcommand("uncertainty", "ensemble entropy and heatmaps");
    CommonFlags uq_common;
    add_common(uncertainty, uq_common);
    std::string n_models, hidden_min, hidden_max, grid, field_enabled;
    add_source_flags(uncertainty);
    uncertainty->add_option("--n-models", n_models, "ensemble size");
    uncertainty->add_option("--hidden-min", hidden_min, "smallest hidden size");
    uncertainty->add_option("--hidden-max", hidden_max, "largest hidden size");
    uncertainty->add_option("--grid", grid, "entropy field resolution nx,ny");
    uncertainty->add_option("--field", field_enabled, "render the 2D entropy field (0/1)");

    // ---- report ----
    CLI::App* report = app.add_subcommand("report", "re-render artifacts from a report.json");
    CommonFlags report_common;
    add_common(report, report_common);
    std::string report_input;
    report->add_option("--input", report_input, "existing report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help exits 0, parse problems are input errors
    }

    try {
        if (extract->parsed()) {
            uqlearn::ExtractOptions options;
            options.manifest_path = images;
            options.arch = arch;
            options.weights_path = weights;
            if (!weights_seed.empty()) {
                options.synth_weights = true;
                options.weights_seed = std::stoull(weights_seed);
            } else if (weights.empty()) {
                std::cerr << "extract: either --weights or --weights-seed is required\n";
                return 2;
            }
            if (!extract_common.out_dir.empty()) options.out_dir = extract_common.out_dir;
            if (!extract_common.jobs.empty()) options.jobs = std::stoi(extract_common.jobs);
            const std::string path = uqlearn::run_extract(options);
            std::cout << "wrote " << path << "\n";
            return 0;
        }

        uqlearn::KvMap overrides;
        if (!synth_spec.empty()) overrides["data.synth"] = synth_spec;
        if (!feature_args.empty()) overrides["data.features"] = join(feature_args, ';');

        if (evaluate->parsed()) {
            if (!classifiers.empty()) overrides["eval.classifiers"] = classifiers;
            if (!runs.empty()) overrides["eval.runs"] = runs;
            if (!test_fraction.empty()) overrides["split.test_fraction"] = test_fraction;
            if (!stratified.empty()) overrides["split.stratified"] = stratified;
            const uqlearn::PipelineConfig config = build_config(eval_common, overrides);
            const uqlearn::Report result = uqlearn::run_evaluate(config);
            for (const uqlearn::PairResult& pair : result.results) {
                std::cout << pair.source << "/" << pair.classifier << ": "
                          << (pair.error.empty() ? "ok" : "FAILED: " + pair.error) << "\n";
            }
            std::cout << "report written to " << config.out_dir << "/report.json\n";
            return result.any_failed() ? 1 : 0;
        }

        if (uncertainty->parsed()) {
            if (!n_models.empty()) overrides["ensemble.n_models"] = n_models;
            if (!hidden_min.empty()) overrides["ensemble.hidden_min"] = hidden_min;
            if (!hidden_max.empty()) overrides["ensemble.hidden_max"] = hidden_max;
            if (!field_enabled.empty()) overrides["field.enabled"] = field_enabled;
            if (!grid.empty()) {
                const size_t comma = grid.find(',');
                if (comma == std::string::npos) {
                    std::cerr << "uncertainty: --grid expects nx,ny\n";
                    return 2;
                }
                overrides["field.nx"] = grid.substr(0, comma);
                overrides["field.ny"] = grid.substr(comma + 1);
            }
            const uqlearn::PipelineConfig config = build_config(uq_common, overrides);
            uqlearn::run_uncertainty(config);
            std::cout << "uncertainty artifacts written to " << config.out_dir << "\n";
            return 0;
        }

        if (report->parsed()) {
            const std::string out_dir =
                report_common.out_dir.empty() ? std::string("out") : report_common.out_dir;
            uqlearn::run_report(report_input, out_dir);
            std::cout << "artifacts re-rendered to " << out_dir << "\n";
            return 0;
        }
    } catch (const uqlearn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const uqlearn::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const uqlearn::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
