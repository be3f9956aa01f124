#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uqlearn/eval.hpp"

namespace uqlearn {

// One (feature source, classifier) cell of the evaluation grid. A failed
// pair keeps its error text instead of results.
struct PairResult {
    std::string source;
    std::string classifier;
    std::optional<RunStats> runs;
    std::optional<AggregatedEval> aggregated;
    std::string error;
};

struct EntropySummary {
    size_t n_samples = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Full evaluation output. config_echo carries every effective setting,
// defaults included, so each random quantity traces to a recorded seed.
struct Report {
    nlohmann::ordered_json config_echo;
    std::vector<PairResult> results;
    std::map<std::string, EntropySummary> entropy; // keyed by source name

    bool any_failed() const;
};

// Versioned JSON document (schema_version 1). Undefined metric ratios are
// written as the string "undefined"; per-run NaN entries become nulls.
nlohmann::ordered_json report_to_json(const Report& report);
void save_report_json(const Report& report, const std::string& path);
Report load_report_json(const std::string& path);

// Flat CSV: one row per (source, classifier), mean and std per metric plus
// the aggregated-prediction metrics.
void save_report_csv(const Report& report, const std::string& path);

} // namespace uqlearn
