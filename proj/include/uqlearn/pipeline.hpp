#pragma once

#include <string>
#include <vector>

#include "uqlearn/config.hpp"
#include "uqlearn/report.hpp"

namespace uqlearn {

struct ExtractOptions {
    std::string manifest_path; // lines "image_path,label"
    std::string arch;          // preset name or architecture spec file
    std::string weights_path;  // FZWT container
    uint64_t weights_seed = 0; // used when synth_weights is set
    bool synth_weights = false;
    std::string out_dir = "out";
    int jobs = 1;
};

// Preprocess the manifest's images, run the forward pass and write
// <out>/features.csv. Returns the output path.
std::string run_extract(const ExtractOptions& options);

// Full repeated-run evaluation over every (source, classifier) pair; writes
// report.json, report.csv, box-plot and ROC SVGs. Per-pair failures land in
// the report, so the returned Report must be checked with any_failed().
Report run_evaluate(const PipelineConfig& config);

// Ensemble uncertainty: per-sample entropies on full-dimension features,
// plus the PCA-2D entropy field, heatmap and scatter when field_enabled.
Report run_uncertainty(const PipelineConfig& config);

// Re-render CSV and SVG artifacts from an existing report.json.
void run_report(const std::string& report_json_path, const std::string& out_dir);

// Shared helper: load or synthesize each configured feature source.
LabeledDataset materialize_source(const FeatureSource& source, uint64_t base_seed);

} // namespace uqlearn
