#include <algorithm>
#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/models.hpp"

namespace uqlearn {

AdaBoostModel::AdaBoostModel(size_t input_dim, std::vector<Stump> stumps,
                             std::vector<double> alphas)
    : TrainedModel(ClassifierKind::adaboost, input_dim),
      stumps_(std::move(stumps)),
      alphas_(std::move(alphas)) {}

double AdaBoostModel::margin(std::span<const double> x) const {
    double f = 0.0;
    for (size_t m = 0; m < stumps_.size(); ++m) f += alphas_[m] * stumps_[m].vote(x);
    return f;
}

ProbabilityPrediction AdaBoostModel::do_predict(std::span<const double> x) const {
    // Logistic link of the additive model (Friedman's 2F mapping).
    const double p1 = detail::logistic(2.0 * margin(x));
    return {1.0 - p1, p1};
}

namespace detail {

namespace {

struct BestStump {
    Stump stump;
    double error = 1.0;
};

// Exhaustive stump search: every feature, every midpoint threshold (plus one
// below the minimum), both polarities, scored by weighted 0/1 error.
BestStump find_stump(const Matrix& x, const std::vector<double>& y_signed,
                     const std::vector<double>& w) {
    const size_t n = x.rows(), dim = x.cols();
    BestStump best;
    best.error = 2.0;

    std::vector<std::pair<double, size_t>> vals(n);
    for (size_t f = 0; f < dim; ++f) {
        for (size_t i = 0; i < n; ++i) vals[i] = {x(i, f), i};
        std::sort(vals.begin(), vals.end());

        // err(+1, thr) = sum of w where (x > thr ? +1 : -1) != y. Start with
        // the threshold below the minimum (everything votes +1).
        double err_plus = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (y_signed[i] < 0.0) err_plus += w[i];

        auto consider = [&](double threshold, double err) {
            if (err < best.error - 1e-15) {
                best.error = err;
                best.stump = {static_cast<int>(f), threshold, +1};
            }
            const double flipped = 1.0 - err;
            if (flipped < best.error - 1e-15) {
                best.error = flipped;
                best.stump = {static_cast<int>(f), threshold, -1};
            }
        };

        consider(vals.front().first - 1.0, err_plus);
        for (size_t i = 0; i < n; ++i) {
            const size_t row = vals[i].second;
            // Moving the threshold above x[row] flips row's vote to -1.
            err_plus += y_signed[row] < 0.0 ? -w[row] : w[row];
            if (i + 1 < n && vals[i].first == vals[i + 1].first) continue;
            const double threshold =
                i + 1 < n ? 0.5 * (vals[i].first + vals[i + 1].first) : vals[i].first + 1.0;
            consider(threshold, err_plus);
        }
    }
    return best;
}

} // namespace

// Discrete two-class boosting over decision stumps. The weighted error is
// floored at 1e-10 so a perfect stump cannot divide by zero.
std::unique_ptr<TrainedModel> fit_adaboost(const ClassifierConfig& config,
                                           const LabeledDataset& train) {
    const size_t n = train.size();
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = train.labels[i] == 1 ? 1.0 : -1.0;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<Stump> stumps;
    std::vector<double> alphas;

    for (int round = 0; round < config.n_weak; ++round) {
        BestStump found = find_stump(train.features, y, w);
        const double eps = std::clamp(found.error, 1e-10, 1.0 - 1e-10);
        if (eps >= 0.5) break; // no stump better than chance under these weights
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);

        stumps.push_back(found.stump);
        alphas.push_back(alpha);

        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const int vote = found.stump.vote(train.features.row(i));
            w[i] *= std::exp(-alpha * y[i] * vote);
            total += w[i];
        }
        for (double& wi : w) wi /= total;
    }
    return std::make_unique<AdaBoostModel>(train.dim(), std::move(stumps), std::move(alphas));
}

} // namespace detail
} // namespace uqlearn
