#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"

namespace uqlearn {

const char* kind_name(ClassifierKind kind) {
    switch (kind) {
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::rbf_svm: return "rbf_svm";
    case ClassifierKind::gp: return "gp";
    case ClassifierKind::mlp: return "mlp";
    case ClassifierKind::random_forest: return "random_forest";
    case ClassifierKind::adaboost: return "adaboost";
    case ClassifierKind::gnb: return "gnb";
    }
    return "?";
}

ClassifierKind kind_from_name(const std::string& name) {
    for (ClassifierKind k : {ClassifierKind::knn, ClassifierKind::linear_svm,
                             ClassifierKind::rbf_svm, ClassifierKind::gp, ClassifierKind::mlp,
                             ClassifierKind::random_forest, ClassifierKind::adaboost,
                             ClassifierKind::gnb})
        if (name == kind_name(k)) return k;
    throw ValidationError("unknown classifier kind \"" + name + "\"");
}

void ClassifierConfig::validate() const {
    if (k < 1) throw ValidationError("config: k must be >= 1");
    if (minkowski_p < 1.0) throw ValidationError("config: minkowski_p must be >= 1");
    if (sigma <= 0.0) throw ValidationError("config: sigma must be > 0");
    if (c_penalty <= 0.0) throw ValidationError("config: c_penalty must be > 0");
    if (hidden_units < 1) throw ValidationError("config: hidden_units must be >= 1");
    if (epochs < 1) throw ValidationError("config: epochs must be >= 1");
    if (learning_rate <= 0.0) throw ValidationError("config: learning_rate must be > 0");
    if (batch_size < 1) throw ValidationError("config: batch_size must be >= 1");
    if (n_trees < 1) throw ValidationError("config: n_trees must be >= 1");
    if (n_weak < 1) throw ValidationError("config: n_weak must be >= 1");
}

void ProbabilityPrediction::validate() const {
    if (!(p0 >= 0.0 && p0 <= 1.0 && p1 >= 0.0 && p1 <= 1.0))
        throw ValidationError("probability outside [0,1]");
    if (std::abs(p0 + p1 - 1.0) > 1e-9)
        throw ValidationError("probabilities do not sum to 1");
}

void TrainedModel::check_input(std::span<const double> x) const {
    if (x.size() != input_dim_)
        throw ShapeError(std::string(kind_name(kind_)) + ": query has " +
                         std::to_string(x.size()) + " features, model expects " +
                         std::to_string(input_dim_));
    for (double v : x)
        if (!std::isfinite(v))
            throw ValidationError(std::string(kind_name(kind_)) + ": non-finite query feature");
}

ProbabilityPrediction TrainedModel::predict_proba(std::span<const double> x) const {
    check_input(x);
    ProbabilityPrediction p = do_predict(x);
    p.validate();
    return p;
}

double TrainedModel::decision_score(std::span<const double> x) const {
    return predict_proba(x).p1;
}

int TrainedModel::predict_label(std::span<const double> x) const {
    ProbabilityPrediction p = predict_proba(x);
    return p.p1 > p.p0 ? 1 : 0; // exact tie resolves to 0
}

double minkowski_distance(std::span<const double> x, std::span<const double> y, double p) {
    if (x.size() != y.size())
        throw ShapeError("minkowski_distance: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
    if (p < 1.0) throw ValidationError("minkowski_distance: p must be >= 1");
    if (p == 2.0) {
        double s = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), p);
    return std::pow(s, 1.0 / p);
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double sigma,
                  bool unsquared) {
    if (x.size() != y.size())
        throw ShapeError("rbf_kernel: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()) + " differ");
    if (sigma <= 0.0) throw ValidationError("rbf_kernel: sigma must be > 0");
    double sq = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    const double dist = unsquared ? std::sqrt(sq) : sq;
    return std::exp(-dist / (2.0 * sigma * sigma));
}

namespace {

void validate_train(const ClassifierConfig& config, const LabeledDataset& train) {
    config.validate();
    train.validate();
    for (double v : train.features.data())
        if (!std::isfinite(v)) throw ValidationError("fit: non-finite training feature");

    const bool tolerates_one_class =
        config.kind == ClassifierKind::knn || config.kind == ClassifierKind::gnb;
    if (!tolerates_one_class) {
        if (train.count_label(0) == 0 || train.count_label(1) == 0)
            throw ValidationError(std::string(kind_name(config.kind)) +
                                  ": training set must contain both classes");
    }
}

} // namespace

std::unique_ptr<TrainedModel> fit(const ClassifierConfig& config, const LabeledDataset& train) {
    validate_train(config, train);
    switch (config.kind) {
    case ClassifierKind::knn: return detail::fit_knn(config, train);
    case ClassifierKind::linear_svm: return detail::fit_linear_svm(config, train);
    case ClassifierKind::rbf_svm: return detail::fit_rbf_svm(config, train);
    case ClassifierKind::gp: return detail::fit_gp(config, train);
    case ClassifierKind::mlp: return detail::fit_mlp(config, train);
    case ClassifierKind::random_forest: return detail::fit_forest(config, train);
    case ClassifierKind::adaboost: return detail::fit_adaboost(config, train);
    case ClassifierKind::gnb: return detail::fit_gnb(config, train);
    }
    throw ValidationError("fit: unknown classifier kind");
}

} // namespace uqlearn
