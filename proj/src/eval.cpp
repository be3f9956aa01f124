#include "uqlearn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "uqlearn/errors.hpp"
#include "uqlearn/parallel.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions) {
    if (labels.size() != predictions.size())
        throw ShapeError("confusion: " + std::to_string(labels.size()) + " labels vs " +
                         std::to_string(predictions.size()) + " predictions");
    if (labels.empty()) throw ValidationError("confusion: empty input");
    ConfusionMatrix cm;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1)
            predictions[i] == 1 ? ++cm.tp : ++cm.fn;
        else
            predictions[i] == 1 ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ValidationError("metrics: empty confusion matrix");
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fn > 0)
        m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (cm.tn + cm.fp > 0)
        m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
    return m;
}

RocResult roc_auc(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size())
        throw ShapeError("roc_auc: label/score length mismatch");
    size_t n_pos = 0, n_neg = 0;
    for (int l : labels) (l == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw ValidationError("roc_auc: both classes must be present");

    std::vector<size_t> order(labels.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] > scores[b]; });

    RocResult result;
    result.curve.fpr.push_back(0.0);
    result.curve.tpr.push_back(0.0);

    size_t tp = 0, fp = 0;
    double auc = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        // One threshold step per group of equal scores.
        const double s = scores[order[i]];
        size_t group_tp = 0, group_fp = 0;
        while (i < order.size() && scores[order[i]] == s) {
            labels[order[i]] == 1 ? ++group_tp : ++group_fp;
            ++i;
        }
        const double prev_tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double prev_fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        tp += group_tp;
        fp += group_fp;
        const double cur_tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double cur_fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        auc += (cur_fpr - prev_fpr) * 0.5 * (prev_tpr + cur_tpr);
        result.curve.fpr.push_back(cur_fpr);
        result.curve.tpr.push_back(cur_tpr);
    }
    result.auc = auc;
    return result;
}

namespace {

// Type-7 quantile: linear interpolation at h = (n-1)p over sorted values.
double quantile_type7(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const size_t lo = static_cast<size_t>(h);
    const size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

BoxplotStats boxplot_stats(std::span<const double> values) {
    if (values.empty()) throw ValidationError("boxplot_stats: empty input");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxplotStats s;
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_type7(sorted, 0.25);
    s.median = quantile_type7(sorted, 0.5);
    s.q3 = quantile_type7(sorted, 0.75);

    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_low = s.max;
    s.whisker_high = s.min;
    for (double v : sorted) {
        if (v >= lo_fence && v < s.whisker_low) s.whisker_low = v;
        if (v <= hi_fence && v > s.whisker_high) s.whisker_high = v;
        if (v < lo_fence || v > hi_fence) s.outliers.push_back(v);
    }
    return s;
}

MetricSummary summarize(std::span<const double> values) {
    std::vector<double> defined;
    for (double v : values)
        if (!std::isnan(v)) defined.push_back(v);
    if (defined.empty()) throw ValidationError("summarize: no defined values");

    MetricSummary s;
    for (double v : defined) s.mean += v;
    s.mean /= static_cast<double>(defined.size());
    if (defined.size() > 1) {
        double ss = 0.0;
        for (double v : defined) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(defined.size() - 1));
    }
    const BoxplotStats box = boxplot_stats(defined);
    s.min = box.min;
    s.q1 = box.q1;
    s.median = box.median;
    s.q3 = box.q3;
    s.max = box.max;
    return s;
}

RunStats repeated_runs(const LabeledDataset& ds, const ClassifierConfig& classifier,
                       const SplitSpec& split_spec, size_t n_runs, uint64_t base_seed) {
    if (n_runs < 1) throw ValidationError("repeated_runs: n_runs must be >= 1");

    RunStats stats;
    stats.n_runs = n_runs;
    const std::vector<std::string> names = {"accuracy", "sensitivity", "specificity", "auc"};
    for (const auto& name : names)
        stats.values[name].assign(n_runs, std::numeric_limits<double>::quiet_NaN());

    parallel_for(n_runs, [&](size_t r) {
        try {
            SplitSpec run_split = split_spec;
            run_split.seed = base_seed ^ splitmix64(r);
            auto [train, test] = split(ds, run_split);

            ClassifierConfig run_config = classifier;
            run_config.seed = base_seed ^ splitmix64(r + n_runs);
            const std::unique_ptr<TrainedModel> model = fit(run_config, train);

            std::vector<int> predictions(test.size());
            std::vector<double> scores(test.size());
            for (size_t i = 0; i < test.size(); ++i) {
                predictions[i] = model->predict_label(test.features.row(i));
                scores[i] = model->decision_score(test.features.row(i));
            }

            const Metrics m = metrics(confusion(test.labels, predictions));
            if (m.accuracy) stats.values["accuracy"][r] = *m.accuracy;
            if (m.sensitivity) stats.values["sensitivity"][r] = *m.sensitivity;
            if (m.specificity) stats.values["specificity"][r] = *m.specificity;
            if (test.count_label(0) > 0 && test.count_label(1) > 0)
                stats.values["auc"][r] = roc_auc(test.labels, scores).auc;
        } catch (const std::runtime_error& e) {
            throw ValidationError("run " + std::to_string(r) + ": " + e.what());
        }
    });

    for (const auto& name : names) stats.summary[name] = summarize(stats.values[name]);
    return stats;
}

std::vector<int> aggregate_predictions(
    const std::vector<std::vector<ProbabilityPrediction>>& per_run_probas) {
    if (per_run_probas.empty()) throw ValidationError("aggregate_predictions: no runs");
    const size_t n = per_run_probas.front().size();
    if (n == 0) throw ValidationError("aggregate_predictions: no samples");
    for (const auto& run : per_run_probas)
        if (run.size() != n)
            throw ValidationError("aggregate_predictions: runs cover different sample counts");

    std::vector<int> labels(n);
    for (size_t i = 0; i < n; ++i) {
        double p1 = 0.0;
        for (const auto& run : per_run_probas) p1 += run[i].p1;
        p1 /= static_cast<double>(per_run_probas.size());
        labels[i] = p1 > 0.5 ? 1 : 0; // tie resolves to 0
    }
    return labels;
}

AggregatedEval aggregated_evaluation(const LabeledDataset& ds, const ClassifierConfig& classifier,
                                     const SplitSpec& split_spec, size_t n_runs,
                                     uint64_t base_seed) {
    if (n_runs < 1) throw ValidationError("aggregated_evaluation: n_runs must be >= 1");
    SplitSpec holdout = split_spec;
    holdout.seed = base_seed;
    auto [train, test] = split(ds, holdout);

    std::vector<std::vector<ProbabilityPrediction>> per_run(
        n_runs, std::vector<ProbabilityPrediction>(test.size()));
    parallel_for(n_runs, [&](size_t r) {
        ClassifierConfig run_config = classifier;
        run_config.seed = base_seed ^ splitmix64(r);
        const std::unique_ptr<TrainedModel> model = fit(run_config, train);
        for (size_t i = 0; i < test.size(); ++i)
            per_run[r][i] = model->predict_proba(test.features.row(i));
    });

    AggregatedEval out;
    out.labels = test.labels;
    out.mean_p1.resize(test.size());
    for (size_t i = 0; i < test.size(); ++i) {
        double p1 = 0.0;
        for (size_t r = 0; r < n_runs; ++r) p1 += per_run[r][i].p1;
        out.mean_p1[i] = p1 / static_cast<double>(n_runs);
    }
    const std::vector<int> predicted = aggregate_predictions(per_run);
    out.metrics = metrics(confusion(test.labels, predicted));
    out.roc = roc_auc(test.labels, out.mean_p1);
    return out;
}

} // namespace uqlearn
