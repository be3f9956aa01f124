#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uqlearn/classifier.hpp"
#include "uqlearn/data.hpp"
#include "uqlearn/uq.hpp"

namespace uqlearn {

// Plain-text configuration: "key = value" lines under bracketed [section]
// headers, '#' or ';' comments. Keys flatten to "section.key".
using KvMap = std::map<std::string, std::string>;
KvMap parse_config_text(const std::string& text, const std::string& origin);
KvMap parse_config_file(const std::string& path);

struct SynthSpec {
    size_t n_pos = 0;
    size_t n_neg = 0;
    size_t dim = 0;
    double separation = 0.0;
};

// Exactly one of csv_path / synth is set.
struct FeatureSource {
    std::string name;
    std::string csv_path;
    std::optional<SynthSpec> synth;
};

struct PipelineConfig {
    std::vector<FeatureSource> sources;
    std::vector<ClassifierKind> classifiers; // empty means all eight
    SplitSpec split;
    size_t n_runs = 100;
    ClassifierConfig classifier_defaults;
    EnsembleConfig ensemble;
    size_t pca_components = 2;
    bool field_enabled = true;
    size_t field_nx = 100;
    size_t field_ny = 100;
    double field_margin = 0.1; // fractional bound padding around the samples
    std::string out_dir = "out";
    uint64_t base_seed = 0;
    int jobs = 1;

    std::vector<ClassifierKind> effective_classifiers() const;
    void validate() const;
};

// Defaults, overlaid with config-file keys. Unknown keys are rejected.
PipelineConfig pipeline_config_from_kv(const KvMap& kv);

// Flat echo of every effective setting, defaults included.
nlohmann::ordered_json config_echo(const PipelineConfig& config);

SynthSpec parse_synth_spec(const std::string& text); // "n_pos,n_neg,dim,separation"

} // namespace uqlearn
