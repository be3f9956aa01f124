#include <numeric>

#include "fit_detail.hpp"
#include "uqlearn/models.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

MlpModel::MlpModel(MlpNet net) : TrainedModel(ClassifierKind::mlp, net.input_dim()), net_(std::move(net)) {}

ProbabilityPrediction MlpModel::do_predict(std::span<const double> x) const {
    double p[2];
    net_.forward(x, p);
    return {p[0], p[1]};
}

namespace detail {

// Plain SGD on shuffled mini-batches; initialization and shuffling both come
// from the seeded generator, so a fit is a pure function of (config, data).
std::unique_ptr<TrainedModel> fit_mlp(const ClassifierConfig& config, const LabeledDataset& train) {
    Rng rng(config.seed);
    MlpNet net(train.dim(), static_cast<size_t>(config.hidden_units));
    net.init_glorot(rng);

    const size_t n = train.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    std::vector<std::span<const double>> batch;
    std::vector<int> batch_labels;
    const size_t batch_size = static_cast<size_t>(config.batch_size);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (size_t i = n; i > 1; --i) {
            const size_t j = rng.uniform_index(i);
            std::swap(order[i - 1], order[j]);
        }
        for (size_t start = 0; start < n; start += batch_size) {
            const size_t end = std::min(start + batch_size, n);
            batch.clear();
            batch_labels.clear();
            for (size_t s = start; s < end; ++s) {
                batch.push_back(train.features.row(order[s]));
                batch_labels.push_back(train.labels[order[s]]);
            }
            net.apply_gradient(net.gradient(batch, batch_labels), config.learning_rate);
        }
    }
    return std::make_unique<MlpModel>(std::move(net));
}

} // namespace detail
} // namespace uqlearn
