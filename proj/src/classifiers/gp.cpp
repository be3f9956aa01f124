#include <cmath>

#include "fit_detail.hpp"
#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"

namespace uqlearn {

GpModel::GpModel(Matrix train_x, std::vector<double> grad, double sigma, bool unsquared)
    : TrainedModel(ClassifierKind::gp, train_x.cols()),
      train_x_(std::move(train_x)),
      grad_(std::move(grad)),
      sigma_(sigma),
      unsquared_(unsquared) {
    if (grad_.size() != train_x_.rows()) throw ShapeError("gp: gradient length mismatch");
}

ProbabilityPrediction GpModel::do_predict(std::span<const double> x) const {
    // Latent mean at the Laplace mode: f* = k(X, x) . (t - pi_hat).
    double latent = 0.0;
    for (size_t i = 0; i < train_x_.rows(); ++i)
        latent += grad_[i] * rbf_kernel(train_x_.row(i), x, sigma_, unsquared_);
    const double p1 = detail::logistic(latent);
    return {1.0 - p1, p1};
}

namespace detail {

// Laplace approximation with logistic likelihood (Newton iterations on the
// latent values, jitter 1e-8 on the kernel diagonal).
std::unique_ptr<TrainedModel> fit_gp(const ClassifierConfig& config, const LabeledDataset& train) {
    const size_t n = train.size();
    Matrix kernel(n, n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double k = rbf_kernel(train.features.row(i), train.features.row(j), config.sigma,
                                  config.unsquared_norm);
            if (i == j) k += 1e-8;
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }

    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = static_cast<double>(train.labels[i]);

    std::vector<double> f(n, 0.0);
    std::vector<double> pi(n), sqrt_w(n), blob(n), grad(n);

    for (int iter = 0; iter < 50; ++iter) {
        for (size_t i = 0; i < n; ++i) {
            pi[i] = logistic(f[i]);
            sqrt_w[i] = std::sqrt(pi[i] * (1.0 - pi[i]));
            grad[i] = t[i] - pi[i];
            blob[i] = pi[i] * (1.0 - pi[i]) * f[i] + grad[i]; // W f + grad
        }

        // B = I + sqrtW K sqrtW, solved by Cholesky.
        Matrix b_mat(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                b_mat(i, j) = (i == j ? 1.0 : 0.0) + sqrt_w[i] * kernel(i, j) * sqrt_w[j];
        const Matrix chol = cholesky_lower(b_mat);

        // a = blob - sqrtW B^{-1} sqrtW K blob ; f_new = K a
        std::vector<double> k_blob(n, 0.0);
        for (size_t i = 0; i < n; ++i) k_blob[i] = dot(kernel.row(i), blob);
        std::vector<double> rhs(n);
        for (size_t i = 0; i < n; ++i) rhs[i] = sqrt_w[i] * k_blob[i];
        const std::vector<double> solved =
            solve_lower_transposed(chol, solve_lower(chol, rhs));
        std::vector<double> a(n);
        for (size_t i = 0; i < n; ++i) a[i] = blob[i] - sqrt_w[i] * solved[i];

        double delta = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double f_new = dot(kernel.row(i), a);
            delta = std::max(delta, std::abs(f_new - f[i]));
            f[i] = f_new;
        }
        if (delta < 1e-8) break;
    }

    for (size_t i = 0; i < n; ++i) grad[i] = t[i] - logistic(f[i]);
    return std::make_unique<GpModel>(train.features, std::move(grad), config.sigma,
                                     config.unsquared_norm);
}

} // namespace detail
} // namespace uqlearn
