#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"

namespace uqlearn {

GnbModel::GnbModel(std::vector<double> prior, Matrix mean, Matrix var)
    : TrainedModel(ClassifierKind::gnb, mean.cols()),
      prior_(std::move(prior)),
      mean_(std::move(mean)),
      var_(std::move(var)) {
    if (prior_.size() != 2 || mean_.rows() != 2 || var_.rows() != 2 ||
        mean_.cols() != var_.cols())
        throw ShapeError("gnb: parameter shapes inconsistent");
}

ProbabilityPrediction GnbModel::do_predict(std::span<const double> x) const {
    // Log joint per class, normalized through a stable log-sum-exp. A class
    // absent from training (prior 0) keeps probability 0.
    double log_joint[2];
    bool present[2];
    for (size_t c = 0; c < 2; ++c) {
        present[c] = prior_[c] > 0.0;
        if (!present[c]) {
            log_joint[c] = 0.0;
            continue;
        }
        double lj = std::log(prior_[c]);
        for (size_t j = 0; j < input_dim(); ++j) {
            const double d = x[j] - mean_(c, j);
            lj += -0.5 * std::log(2.0 * M_PI * var_(c, j)) - d * d / (2.0 * var_(c, j));
        }
        log_joint[c] = lj;
    }
    if (!present[0]) return {0.0, 1.0};
    if (!present[1]) return {1.0, 0.0};

    const double m = std::max(log_joint[0], log_joint[1]);
    const double e0 = std::exp(log_joint[0] - m), e1 = std::exp(log_joint[1] - m);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

namespace detail {

// Gaussian naive Bayes: class priors from frequencies, per-feature maximum
// likelihood mean/variance with the variance floored at 1e-9.
std::unique_ptr<TrainedModel> fit_gnb(const ClassifierConfig& config, const LabeledDataset& train) {
    (void)config;
    const size_t dim = train.dim();
    std::vector<double> prior(2, 0.0);
    Matrix mean(2, dim, 0.0), var(2, dim, 0.0);
    size_t counts[2] = {train.count_label(0), train.count_label(1)};

    for (size_t i = 0; i < train.size(); ++i) {
        const size_t c = static_cast<size_t>(train.labels[i]);
        for (size_t j = 0; j < dim; ++j) mean(c, j) += train.features(i, j);
    }
    for (size_t c = 0; c < 2; ++c) {
        prior[c] = static_cast<double>(counts[c]) / static_cast<double>(train.size());
        if (counts[c] == 0) continue;
        for (size_t j = 0; j < dim; ++j) mean(c, j) /= static_cast<double>(counts[c]);
    }
    for (size_t i = 0; i < train.size(); ++i) {
        const size_t c = static_cast<size_t>(train.labels[i]);
        for (size_t j = 0; j < dim; ++j) {
            const double d = train.features(i, j) - mean(c, j);
            var(c, j) += d * d;
        }
    }
    for (size_t c = 0; c < 2; ++c)
        for (size_t j = 0; j < dim; ++j)
            var(c, j) = counts[c] == 0
                            ? 1.0
                            : std::max(var(c, j) / static_cast<double>(counts[c]), 1e-9);

    return std::make_unique<GnbModel>(std::move(prior), std::move(mean), std::move(var));
}

} // namespace detail
} // namespace uqlearn
