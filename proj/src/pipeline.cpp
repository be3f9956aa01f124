#include "uqlearn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "uqlearn/errors.hpp"
#include "uqlearn/extractor.hpp"
#include "uqlearn/image.hpp"
#include "uqlearn/parallel.hpp"
#include "uqlearn/reduction.hpp"
#include "uqlearn/rng.hpp"
#include "uqlearn/svg.hpp"
#include "uqlearn/uq.hpp"

namespace uqlearn {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

ArchitectureSpec resolve_arch(const std::string& arch) {
    if (auto preset = find_preset(arch)) return *preset;
    if (!fs::exists(arch))
        throw IoError("architecture \"" + arch + "\" is neither a preset nor a readable file");
    return load_arch_spec(arch);
}

struct ManifestEntry {
    std::string path;
    int label;
};

std::vector<ManifestEntry> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError(path + ": expected image_path,label", line_no);
        ManifestEntry e;
        e.path = line.substr(0, comma);
        const std::string label = line.substr(comma + 1);
        if (label == "0") e.label = 0;
        else if (label == "1") e.label = 1;
        else throw ParseError(path + ": label \"" + label + "\" outside {0,1}", line_no);
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw ParseError(path + ": empty manifest", line_no);
    return entries;
}

// Classifier label order used everywhere plots enumerate the eight kinds.
std::string pair_title(const std::string& source, const std::string& what) {
    return source + " " + what;
}

void render_evaluation_plots(const Report& report, const std::string& out_dir) {
    // group results per source
    std::vector<std::string> sources;
    for (const PairResult& pair : report.results)
        if (std::find(sources.begin(), sources.end(), pair.source) == sources.end())
            sources.push_back(pair.source);

    for (const std::string& source : sources) {
        std::vector<const PairResult*> pairs;
        for (const PairResult& pair : report.results)
            if (pair.source == source && pair.error.empty()) pairs.push_back(&pair);
        if (pairs.empty()) continue;

        for (const char* metric : {"accuracy", "sensitivity", "specificity"}) {
            std::vector<std::string> labels;
            std::vector<BoxplotStats> stats;
            for (const PairResult* pair : pairs) {
                std::vector<double> defined;
                for (double v : pair->runs->values.at(metric))
                    if (!std::isnan(v)) defined.push_back(v);
                if (defined.empty()) continue;
                labels.push_back(pair->classifier);
                stats.push_back(boxplot_stats(defined));
            }
            if (labels.empty()) continue;
            write_svg(boxplot_svg(labels, stats, pair_title(source, metric)),
                      out_dir + "/boxplot_" + source + "_" + metric + ".svg");
        }

        std::vector<std::string> names;
        std::vector<RocCurve> curves;
        std::vector<double> aucs;
        for (const PairResult* pair : pairs) {
            if (!pair->aggregated) continue;
            names.push_back(pair->classifier);
            curves.push_back(pair->aggregated->roc.curve);
            aucs.push_back(pair->aggregated->roc.auc);
        }
        if (!names.empty())
            write_svg(roc_svg(names, curves, aucs, pair_title(source, "ROC")),
                      out_dir + "/roc_" + source + ".svg");
    }
}

} // namespace

LabeledDataset materialize_source(const FeatureSource& source, uint64_t base_seed) {
    if (source.synth) {
        const SynthSpec& s = *source.synth;
        return synth_gaussian(s.n_pos, s.n_neg, s.dim, s.separation, base_seed);
    }
    if (!fs::exists(source.csv_path))
        throw IoError("feature csv not found: " + source.csv_path);
    return load_feature_csv(source.csv_path);
}

std::string run_extract(const ExtractOptions& options) {
    set_worker_count(options.jobs);
    const ArchitectureSpec arch = resolve_arch(options.arch);
    if (!arch.executable())
        throw ValidationError("architecture \"" + arch.name +
                              "\" is metadata-only; features must be ingested from CSV");

    WeightStore weights;
    if (options.synth_weights) {
        weights = make_random_weights(arch, options.weights_seed);
    } else {
        if (!fs::exists(options.weights_path))
            throw IoError("weights file not found: " + options.weights_path);
        weights = load_weights(options.weights_path);
    }

    const std::vector<ManifestEntry> manifest = read_manifest(options.manifest_path);
    std::vector<Image> images;
    images.reserve(manifest.size());
    for (const ManifestEntry& e : manifest) {
        if (!fs::exists(e.path)) throw IoError("image not found: " + e.path);
        images.push_back(read_pnm(e.path));
    }

    const Tensor4 batch = preprocess_batch(images, arch.input_h, arch.input_w);
    LabeledDataset ds;
    ds.features = extract_features(batch, arch, weights);
    for (const ManifestEntry& e : manifest) {
        ds.labels.push_back(e.label);
        ds.ids.push_back(fs::path(e.path).stem().string());
    }

    ensure_dir(options.out_dir);
    const std::string out_path = options.out_dir + "/features.csv";
    save_feature_csv(ds, out_path);
    return out_path;
}

Report run_evaluate(const PipelineConfig& config) {
    config.validate();
    set_worker_count(config.jobs);
    ensure_dir(config.out_dir);

    Report report;
    report.config_echo = config_echo(config);

    for (const FeatureSource& source : config.sources) {
        LabeledDataset ds = materialize_source(source, config.base_seed);
        for (ClassifierKind kind : config.effective_classifiers()) {
            PairResult pair;
            pair.source = source.name;
            pair.classifier = kind_name(kind);
            try {
                ClassifierConfig cc = config.classifier_defaults;
                cc.kind = kind;
                pair.runs = repeated_runs(ds, cc, config.split, config.n_runs, config.base_seed);
                pair.aggregated =
                    aggregated_evaluation(ds, cc, config.split, config.n_runs, config.base_seed);
            } catch (const std::runtime_error& e) {
                pair.runs.reset();
                pair.aggregated.reset();
                pair.error = e.what();
            }
            report.results.push_back(std::move(pair));
        }
    }

    save_report_json(report, config.out_dir + "/report.json");
    save_report_csv(report, config.out_dir + "/report.csv");
    render_evaluation_plots(report, config.out_dir);
    return report;
}

Report run_uncertainty(const PipelineConfig& config) {
    config.validate();
    set_worker_count(config.jobs);
    ensure_dir(config.out_dir);

    Report report;
    report.config_echo = config_echo(config);

    for (const FeatureSource& source : config.sources) {
        LabeledDataset ds = materialize_source(source, config.base_seed);

        // Full-dimension ensemble: per-sample predictive entropies.
        EnsembleConfig ec = config.ensemble;
        ec.base_seed = config.base_seed;
        const Ensemble full = build_ensemble(ds, ec);

        std::vector<double> entropies(ds.size());
        parallel_for(ds.size(), [&](size_t i) {
            entropies[i] = predictive_entropy(mean_predictive(full, ds.features.row(i)));
        });
        {
            std::ofstream csv(config.out_dir + "/entropy_samples_" + source.name + ".csv",
                              std::ios::trunc);
            if (!csv) throw IoError("cannot write per-sample entropy csv");
            csv << "id,label,entropy\n";
            for (size_t i = 0; i < ds.size(); ++i)
                csv << ds.ids[i] << ',' << ds.labels[i] << ',' << entropies[i] << '\n';
        }
        EntropySummary summary;
        summary.n_samples = ds.size();
        summary.min = summary.max = entropies.empty() ? 0.0 : entropies[0];
        for (double h : entropies) {
            summary.mean += h;
            summary.min = std::min(summary.min, h);
            summary.max = std::max(summary.max, h);
        }
        summary.mean /= static_cast<double>(ds.size());
        report.entropy[source.name] = summary;

        if (!config.field_enabled) continue;

        // PCA to 2D, ensemble on the reduced features, entropy field + plots.
        const PcaModel pca = fit_pca(ds.features, 2);
        LabeledDataset reduced;
        reduced.features = pca_transform(pca, ds.features);
        reduced.labels = ds.labels;
        reduced.ids = ds.ids;

        const Ensemble flat = build_ensemble(reduced, ec);

        double x_min = reduced.features(0, 0), x_max = x_min;
        double y_min = reduced.features(0, 1), y_max = y_min;
        for (size_t i = 0; i < reduced.size(); ++i) {
            x_min = std::min(x_min, reduced.features(i, 0));
            x_max = std::max(x_max, reduced.features(i, 0));
            y_min = std::min(y_min, reduced.features(i, 1));
            y_max = std::max(y_max, reduced.features(i, 1));
        }
        const double pad_x = std::max(config.field_margin * (x_max - x_min), 1e-6);
        const double pad_y = std::max(config.field_margin * (y_max - y_min), 1e-6);
        const EntropyField field =
            entropy_field(flat, x_min - pad_x, x_max + pad_x, y_min - pad_y, y_max + pad_y,
                          config.field_nx, config.field_ny);

        save_entropy_field(field, config.out_dir + "/entropy_field_" + source.name + ".csv",
                           config.out_dir + "/entropy_field_" + source.name + ".json");
        write_svg(heatmap_svg(field, &reduced.features, &reduced.labels,
                              pair_title(source.name, "predictive entropy")),
                  config.out_dir + "/heatmap_" + source.name + ".svg");
        write_svg(scatter_svg(reduced.features, reduced.labels,
                              pair_title(source.name, "PCA scatter")),
                  config.out_dir + "/scatter_" + source.name + ".svg");
    }

    save_report_json(report, config.out_dir + "/uncertainty.json");
    return report;
}

void run_report(const std::string& report_json_path, const std::string& out_dir) {
    const Report report = load_report_json(report_json_path);
    ensure_dir(out_dir);
    save_report_csv(report, out_dir + "/report.csv");
    render_evaluation_plots(report, out_dir);
}

} // namespace uqlearn
