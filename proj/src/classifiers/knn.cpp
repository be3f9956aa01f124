#include <algorithm>
#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"

namespace uqlearn {

KnnModel::KnnModel(Matrix train_x, std::vector<int> labels, int k, double p)
    : TrainedModel(ClassifierKind::knn, train_x.cols()),
      train_x_(std::move(train_x)),
      labels_(std::move(labels)),
      k_(k),
      p_(p) {
    if (labels_.size() != train_x_.rows()) throw ShapeError("knn: label count mismatch");
    if (static_cast<size_t>(k_) > labels_.size())
        throw ValidationError("knn: k exceeds training set size");
}

std::vector<size_t> KnnModel::nearest(std::span<const double> x) const {
    const size_t n = train_x_.rows();
    std::vector<std::pair<double, size_t>> dist(n);
    for (size_t i = 0; i < n; ++i) dist[i] = {minkowski_distance(train_x_.row(i), x, p_), i};
    // (distance, index) ordering makes tie handling deterministic.
    std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
    std::vector<size_t> idx(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) idx[static_cast<size_t>(i)] = dist[static_cast<size_t>(i)].second;
    return idx;
}

ProbabilityPrediction KnnModel::do_predict(std::span<const double> x) const {
    size_t votes1 = 0;
    for (size_t i : nearest(x)) votes1 += static_cast<size_t>(labels_[i]);
    const double p1 = static_cast<double>(votes1) / static_cast<double>(k_);
    return {1.0 - p1, p1};
}

int KnnModel::predict_label(std::span<const double> x) const {
    check_input(x);
    const std::vector<size_t> idx = nearest(x);
    size_t votes1 = 0;
    for (size_t i : idx) votes1 += static_cast<size_t>(labels_[i]);
    const size_t votes0 = idx.size() - votes1;
    if (votes1 == votes0) return labels_[idx.front()]; // nearer neighbor breaks the tie
    return votes1 > votes0 ? 1 : 0;
}

namespace detail {

std::unique_ptr<TrainedModel> fit_knn(const ClassifierConfig& config, const LabeledDataset& train) {
    if (static_cast<size_t>(config.k) > train.size())
        throw ValidationError("knn: k=" + std::to_string(config.k) + " exceeds " +
                              std::to_string(train.size()) + " training samples");
    return std::make_unique<KnnModel>(train.features, train.labels, config.k, config.minkowski_p);
}

} // namespace detail
} // namespace uqlearn
