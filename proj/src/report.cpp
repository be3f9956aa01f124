#include "uqlearn/report.hpp"

#include <cmath>
#include <fstream>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {

nlohmann::ordered_json metric_json(const std::optional<double>& value) {
    if (!value) return "undefined";
    return *value;
}

nlohmann::ordered_json values_json(const std::vector<double>& values) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double v : values) {
        if (std::isnan(v)) arr.push_back(nullptr);
        else arr.push_back(v);
    }
    return arr;
}

nlohmann::ordered_json summary_json(const MetricSummary& s) {
    return {{"mean", s.mean}, {"std", s.stddev}, {"min", s.min}, {"q1", s.q1},
            {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

MetricSummary summary_from_json(const nlohmann::json& j) {
    MetricSummary s;
    s.mean = j.at("mean").get<double>();
    s.stddev = j.at("std").get<double>();
    s.min = j.at("min").get<double>();
    s.q1 = j.at("q1").get<double>();
    s.median = j.at("median").get<double>();
    s.q3 = j.at("q3").get<double>();
    s.max = j.at("max").get<double>();
    return s;
}

std::string format_metric(const std::optional<double>& value) {
    if (!value) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *value);
    return buf;
}

} // namespace

bool Report::any_failed() const {
    for (const PairResult& r : results)
        if (!r.error.empty()) return true;
    return false;
}

nlohmann::ordered_json report_to_json(const Report& report) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["config"] = report.config_echo;

    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const PairResult& pair : report.results) {
        nlohmann::ordered_json entry;
        entry["source"] = pair.source;
        entry["classifier"] = pair.classifier;
        if (!pair.error.empty()) {
            entry["error"] = pair.error;
        } else {
            if (pair.runs) {
                nlohmann::ordered_json runs;
                runs["n_runs"] = pair.runs->n_runs;
                nlohmann::ordered_json metrics_obj;
                for (const auto& [name, values] : pair.runs->values) {
                    nlohmann::ordered_json m;
                    m["values"] = values_json(values);
                    m["summary"] = summary_json(pair.runs->summary.at(name));
                    metrics_obj[name] = m;
                }
                runs["metrics"] = metrics_obj;
                entry["runs"] = runs;
            }
            if (pair.aggregated) {
                nlohmann::ordered_json agg;
                agg["accuracy"] = metric_json(pair.aggregated->metrics.accuracy);
                agg["sensitivity"] = metric_json(pair.aggregated->metrics.sensitivity);
                agg["specificity"] = metric_json(pair.aggregated->metrics.specificity);
                agg["auc"] = pair.aggregated->roc.auc;
                agg["roc"] = {{"fpr", pair.aggregated->roc.curve.fpr},
                              {"tpr", pair.aggregated->roc.curve.tpr}};
                entry["aggregated"] = agg;
            }
        }
        results.push_back(entry);
    }
    doc["results"] = results;

    nlohmann::ordered_json entropy;
    for (const auto& [source, s] : report.entropy)
        entropy[source] = {{"n_samples", s.n_samples}, {"mean", s.mean}, {"min", s.min},
                           {"max", s.max}};
    doc["entropy"] = entropy;
    return doc;
}

void save_report_json(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

Report load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }

    Report report;
    try {
        if (doc.at("schema_version").get<int>() != 1)
            throw FormatError(path + ": unsupported schema_version");
        report.config_echo = doc.at("config");
        for (const auto& entry : doc.at("results")) {
            PairResult pair;
            pair.source = entry.at("source").get<std::string>();
            pair.classifier = entry.at("classifier").get<std::string>();
            if (entry.contains("error")) {
                pair.error = entry.at("error").get<std::string>();
            } else {
                if (entry.contains("runs")) {
                    RunStats runs;
                    runs.n_runs = entry.at("runs").at("n_runs").get<size_t>();
                    for (const auto& [name, m] : entry.at("runs").at("metrics").items()) {
                        std::vector<double> values;
                        for (const auto& v : m.at("values"))
                            values.push_back(v.is_null() ? std::nan("") : v.get<double>());
                        runs.values[name] = values;
                        runs.summary[name] = summary_from_json(m.at("summary"));
                    }
                    pair.runs = std::move(runs);
                }
                if (entry.contains("aggregated")) {
                    AggregatedEval agg;
                    const auto& a = entry.at("aggregated");
                    auto opt_metric = [](const nlohmann::json& v) -> std::optional<double> {
                        if (v.is_string()) return std::nullopt;
                        return v.get<double>();
                    };
                    agg.metrics.accuracy = opt_metric(a.at("accuracy"));
                    agg.metrics.sensitivity = opt_metric(a.at("sensitivity"));
                    agg.metrics.specificity = opt_metric(a.at("specificity"));
                    agg.roc.auc = a.at("auc").get<double>();
                    agg.roc.curve.fpr = a.at("roc").at("fpr").get<std::vector<double>>();
                    agg.roc.curve.tpr = a.at("roc").at("tpr").get<std::vector<double>>();
                    pair.aggregated = std::move(agg);
                }
            }
            report.results.push_back(std::move(pair));
        }
        for (const auto& [source, s] : doc.at("entropy").items()) {
            EntropySummary es;
            es.n_samples = s.at("n_samples").get<size_t>();
            es.mean = s.at("mean").get<double>();
            es.min = s.at("min").get<double>();
            es.max = s.at("max").get<double>();
            report.entropy[source] = es;
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return report;
}

void save_report_csv(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");

    out << "source,classifier,accuracy_mean,accuracy_std,sensitivity_mean,sensitivity_std,"
           "specificity_mean,specificity_std,auc_mean,auc_std,"
           "agg_accuracy,agg_sensitivity,agg_specificity,agg_auc,error\n";
    char buf[32];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    for (const PairResult& pair : report.results) {
        out << pair.source << ',' << pair.classifier;
        if (!pair.error.empty()) {
            out << ",,,,,,,,,,,,,," << '"' << pair.error << '"' << '\n';
            continue;
        }
        for (const char* metric : {"accuracy", "sensitivity", "specificity", "auc"}) {
            const MetricSummary& s = pair.runs->summary.at(metric);
            out << ',' << num(s.mean) << ',' << num(s.stddev);
        }
        out << ',' << format_metric(pair.aggregated->metrics.accuracy) << ','
            << format_metric(pair.aggregated->metrics.sensitivity) << ','
            << format_metric(pair.aggregated->metrics.specificity) << ','
            << num(pair.aggregated->roc.auc) << ",\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

} // namespace uqlearn
