#include <algorithm>
#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"

namespace uqlearn {

namespace {

// Sequential minimal optimization on the dual with box constraint [0, C].
// Works on a precomputed kernel matrix; y holds signed labels {-1, +1}.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
};

SmoResult solve_smo(const Matrix& kernel, const std::vector<double>& y, double c_penalty) {
    const size_t n = y.size();
    const double tol = 1e-7;
    SmoResult result;
    result.alpha.assign(n, 0.0);
    std::vector<double>& alpha = result.alpha;
    double& b = result.bias;

    // Cached decision values f[i] = sum_j alpha_j y_j K(j,i) + b, updated
    // incrementally after every pair step.
    std::vector<double> f(n, 0.0);

    // Analytic step on the pair (i, j); returns false when the pair cannot
    // move (degenerate box or non-negative curvature).
    auto optimize_pair = [&](size_t i, size_t j) {
        const double e_i = f[i] - y[i];
        const double e_j = f[j] - y[j];

        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, alpha[j] - alpha[i]);
            hi = std::min(c_penalty, c_penalty + alpha[j] - alpha[i]);
        } else {
            lo = std::max(0.0, alpha[i] + alpha[j] - c_penalty);
            hi = std::min(c_penalty, alpha[i] + alpha[j]);
        }
        if (lo >= hi) return false;

        const double eta = 2.0 * kernel(i, j) - kernel(i, i) - kernel(j, j);
        if (eta >= 0.0) return false;

        const double alpha_j_old = alpha[j];
        const double alpha_i_old = alpha[i];
        alpha[j] = std::clamp(alpha_j_old - y[j] * (e_i - e_j) / eta, lo, hi);
        if (std::abs(alpha[j] - alpha_j_old) < 1e-13) {
            alpha[j] = alpha_j_old;
            return false;
        }
        alpha[i] = alpha_i_old + y[i] * y[j] * (alpha_j_old - alpha[j]);

        const double di = y[i] * (alpha[i] - alpha_i_old);
        const double dj = y[j] * (alpha[j] - alpha_j_old);
        const double b1 = b - e_i - di * kernel(i, i) - dj * kernel(i, j);
        const double b2 = b - e_j - di * kernel(i, j) - dj * kernel(j, j);
        const double b_old = b;
        if (alpha[i] > 0.0 && alpha[i] < c_penalty) b = b1;
        else if (alpha[j] > 0.0 && alpha[j] < c_penalty) b = b2;
        else b = 0.5 * (b1 + b2);

        const double db = b - b_old;
        for (size_t k = 0; k < n; ++k) f[k] += di * kernel(i, k) + dj * kernel(j, k) + db;
        return true;
    };

    size_t quiet_passes = 0;
    const size_t max_passes = 200 * n + 10000;
    for (size_t pass = 0; pass < max_passes && quiet_passes < 2; ++pass) {
        size_t changed = 0;
        for (size_t i = 0; i < n; ++i) {
            const double r = y[i] * (f[i] - y[i]);
            if (!((r < -tol && alpha[i] < c_penalty) || (r > tol && alpha[i] > 0.0))) continue;

            // Second choice: largest |E_i - E_j| first, then every other
            // index in order until one moves.
            size_t best = i;
            double best_gap = -1.0;
            const double e_i = f[i] - y[i];
            for (size_t cand = 0; cand < n; ++cand) {
                if (cand == i) continue;
                const double gap = std::abs(e_i - (f[cand] - y[cand]));
                if (gap > best_gap) {
                    best_gap = gap;
                    best = cand;
                }
            }
            bool moved = best != i && optimize_pair(i, best);
            for (size_t step = 1; !moved && step < n; ++step) {
                const size_t j = (i + step) % n;
                if (j != best) moved = optimize_pair(i, j);
            }
            if (moved) ++changed;
        }
        quiet_passes = changed == 0 ? quiet_passes + 1 : 0;
    }
    return result;
}

std::vector<double> signed_labels(const LabeledDataset& train) {
    std::vector<double> y(train.size());
    for (size_t i = 0; i < train.size(); ++i) y[i] = train.labels[i] == 1 ? 1.0 : -1.0;
    return y;
}

} // namespace

LinearSvmModel::LinearSvmModel(std::vector<double> weights, double bias, std::vector<double> alpha)
    : TrainedModel(ClassifierKind::linear_svm, weights.size()),
      weights_(std::move(weights)),
      bias_(bias),
      alpha_(std::move(alpha)) {}

double LinearSvmModel::decision_score(std::span<const double> x) const {
    check_input(x);
    return dot(weights_, x) + bias_;
}

ProbabilityPrediction LinearSvmModel::do_predict(std::span<const double> x) const {
    const double p1 = detail::logistic(dot(weights_, x) + bias_);
    return {1.0 - p1, p1};
}

RbfSvmModel::RbfSvmModel(Matrix support_x, std::vector<double> coef, double bias, double sigma,
                         bool unsquared)
    : TrainedModel(ClassifierKind::rbf_svm, support_x.cols()),
      support_x_(std::move(support_x)),
      coef_(std::move(coef)),
      bias_(bias),
      sigma_(sigma),
      unsquared_(unsquared) {
    if (coef_.size() != support_x_.rows()) throw ShapeError("rbf_svm: coefficient count mismatch");
}

double RbfSvmModel::decision_score(std::span<const double> x) const {
    check_input(x);
    double s = bias_;
    for (size_t i = 0; i < support_x_.rows(); ++i)
        s += coef_[i] * rbf_kernel(support_x_.row(i), x, sigma_, unsquared_);
    return s;
}

ProbabilityPrediction RbfSvmModel::do_predict(std::span<const double> x) const {
    const double p1 = detail::logistic(decision_score(x));
    return {1.0 - p1, p1};
}

namespace detail {

std::unique_ptr<TrainedModel> fit_linear_svm(const ClassifierConfig& config,
                                             const LabeledDataset& train) {
    const size_t n = train.size();
    Matrix kernel(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            const double k = dot(train.features.row(i), train.features.row(j));
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }
    const std::vector<double> y = signed_labels(train);
    SmoResult smo = solve_smo(kernel, y, config.c_penalty);

    std::vector<double> w(train.dim(), 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (smo.alpha[i] == 0.0) continue;
        const double scale = smo.alpha[i] * y[i];
        const auto row = train.features.row(i);
        for (size_t d = 0; d < w.size(); ++d) w[d] += scale * row[d];
    }
    return std::make_unique<LinearSvmModel>(std::move(w), smo.bias, std::move(smo.alpha));
}

std::unique_ptr<TrainedModel> fit_rbf_svm(const ClassifierConfig& config,
                                          const LabeledDataset& train) {
    const size_t n = train.size();
    Matrix kernel(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            const double k =
                rbf_kernel(train.features.row(i), train.features.row(j), config.sigma,
                           config.unsquared_norm);
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }
    const std::vector<double> y = signed_labels(train);
    SmoResult smo = solve_smo(kernel, y, config.c_penalty);

    std::vector<size_t> support;
    for (size_t i = 0; i < n; ++i)
        if (smo.alpha[i] > 1e-12) support.push_back(i);

    Matrix sv(support.size(), train.dim());
    std::vector<double> coef(support.size());
    for (size_t s = 0; s < support.size(); ++s) {
        const size_t i = support[s];
        std::copy(train.features.row(i).begin(), train.features.row(i).end(), sv.row(s).begin());
        coef[s] = smo.alpha[i] * y[i];
    }
    return std::make_unique<RbfSvmModel>(std::move(sv), std::move(coef), smo.bias, config.sigma,
                                         config.unsquared_norm);
}

} // namespace detail
} // namespace uqlearn
