#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqlearn/classifier.hpp"
#include "uqlearn/data.hpp"

namespace uqlearn {

// Positive class is Covid (label 1).
struct ConfusionMatrix {
    size_t tp = 0, fn = 0, fp = 0, tn = 0;
    size_t total() const { return tp + fn + fp + tn; }
};

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions);

// Ratios with zero denominators come back empty ("undefined"), never 0.
struct Metrics {
    std::optional<double> accuracy;
    std::optional<double> sensitivity; // Covid recall, tp/(tp+fn)
    std::optional<double> specificity; // tn/(tn+fp)
};

Metrics metrics(const ConfusionMatrix& cm);

struct RocCurve {
    std::vector<double> fpr; // non-decreasing, starts at 0, ends at 1
    std::vector<double> tpr;
};

struct RocResult {
    RocCurve curve;
    double auc = 0.0;
};

// Threshold sweep over unique scores (descending), ties grouped into one
// step; AUC by the trapezoid rule. Both classes must be present.
RocResult roc_auc(std::span<const int> labels, std::span<const double> scores);

struct BoxplotStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double whisker_low = 0.0, whisker_high = 0.0; // data points at 1.5*IQR fences
    std::vector<double> outliers;
};

// Quartiles by Type-7 linear interpolation.
BoxplotStats boxplot_stats(std::span<const double> values);

struct MetricSummary {
    double mean = 0.0, stddev = 0.0; // sample std (n-1)
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

MetricSummary summarize(std::span<const double> values);

// Per-run metric traces of the repeated-run protocol, keyed by metric name
// (accuracy, sensitivity, specificity, auc). Undefined ratios are stored as
// NaN and excluded from the summaries.
struct RunStats {
    size_t n_runs = 0;
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, MetricSummary> summary;
};

// Run r splits with seed base_seed ^ splitmix64(r) and fits with seed
// base_seed ^ splitmix64(r + n_runs); runs execute in parallel with results
// reduced in run order.
RunStats repeated_runs(const LabeledDataset& ds, const ClassifierConfig& classifier,
                       const SplitSpec& split_spec, size_t n_runs, uint64_t base_seed);

// Mean probability per sample across runs, then argmax (0.5/0.5 tie -> 0).
// All runs must cover the same evaluation rows.
std::vector<int> aggregate_predictions(
    const std::vector<std::vector<ProbabilityPrediction>>& per_run_probas);

struct AggregatedEval {
    Metrics metrics;
    RocResult roc;                       // from the averaged positive-class probabilities
    std::vector<double> mean_p1;         // per held-out sample
    std::vector<int> labels;             // held-out labels
};

// Fixed stratified hold-out (seeded with base_seed), n_runs fits on the same
// training side with per-run classifier seeds; predictions averaged.
AggregatedEval aggregated_evaluation(const LabeledDataset& ds, const ClassifierConfig& classifier,
                                     const SplitSpec& split_spec, size_t n_runs,
                                     uint64_t base_seed);

} // namespace uqlearn
