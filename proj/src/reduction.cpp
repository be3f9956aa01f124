#include "uqlearn/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "uqlearn/errors.hpp"

namespace uqlearn {

PcaModel fit_pca(const Matrix& x, size_t k) {
    const size_t n = x.rows(), d = x.cols();
    if (n < 2) throw ValidationError("fit_pca: need at least 2 rows");
    if (k < 1 || k > std::min(n - 1, d))
        throw ValidationError("fit_pca: k=" + std::to_string(k) + " outside [1, min(rows-1, cols)]");

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < d; ++j) model.mean[j] += x(i, j);
    for (double& m : model.mean) m /= static_cast<double>(n);

    Matrix centered(n, d);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < d; ++j) centered(i, j) = x(i, j) - model.mean[j];

    const double norm = 1.0 / static_cast<double>(n - 1);
    model.components = Matrix(k, d);
    model.explained_variance.resize(k);

    if (d <= n) {
        // Direct d x d covariance eigenproblem.
        Matrix cov(d, d);
        for (size_t a = 0; a < d; ++a)
            for (size_t b = a; b < d; ++b) {
                double s = 0.0;
                for (size_t i = 0; i < n; ++i) s += centered(i, a) * centered(i, b);
                cov(a, b) = s * norm;
                cov(b, a) = cov(a, b);
            }
        const EighResult eig = eigh(cov);
        for (size_t c = 0; c < k; ++c) {
            model.explained_variance[c] = std::max(eig.eigenvalues[c], 0.0);
            for (size_t j = 0; j < d; ++j) model.components(c, j) = eig.eigenvectors(j, c);
        }
    } else {
        // Gram trick: eigenvectors of (1/(n-1)) C C^T lift to covariance
        // eigenvectors via v = C^T u / sqrt((n-1) lambda).
        Matrix gram(n, n);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = a; b < n; ++b) {
                gram(a, b) = dot(centered.row(a), centered.row(b)) * norm;
                gram(b, a) = gram(a, b);
            }
        const EighResult eig = eigh(gram);
        for (size_t c = 0; c < k; ++c) {
            const double lambda = std::max(eig.eigenvalues[c], 0.0);
            model.explained_variance[c] = lambda;
            const double denom = std::sqrt(static_cast<double>(n - 1) * lambda);
            for (size_t j = 0; j < d; ++j) {
                double s = 0.0;
                for (size_t i = 0; i < n; ++i) s += centered(i, j) * eig.eigenvectors(i, c);
                model.components(c, j) = denom > 1e-300 ? s / denom : 0.0;
            }
            // Renormalize against rounding in the lift.
            double len = std::sqrt(dot(model.components.row(c), model.components.row(c)));
            if (len > 1e-300)
                for (size_t j = 0; j < d; ++j) model.components(c, j) /= len;
        }
    }

    // Sign canonicalization: largest-magnitude entry of each component positive.
    for (size_t c = 0; c < k; ++c) {
        size_t arg = 0;
        for (size_t j = 1; j < d; ++j)
            if (std::abs(model.components(c, j)) > std::abs(model.components(c, arg))) arg = j;
        if (model.components(c, arg) < 0.0)
            for (size_t j = 0; j < d; ++j) model.components(c, j) = -model.components(c, j);
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    const size_t d = model.mean.size(), k = model.components.rows();
    if (x.cols() != d)
        throw ShapeError("pca_transform: input has " + std::to_string(x.cols()) +
                         " cols, model expects " + std::to_string(d));
    Matrix out(x.rows(), k);
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (size_t j = 0; j < d; ++j) s += (x(i, j) - model.mean[j]) * model.components(c, j);
            out(i, c) = s;
        }
    return out;
}

Matrix pca_inverse(const PcaModel& model, const Matrix& z) {
    const size_t d = model.mean.size(), k = model.components.rows();
    if (z.cols() != k)
        throw ShapeError("pca_inverse: input has " + std::to_string(z.cols()) +
                         " cols, model has " + std::to_string(k) + " components");
    Matrix out(z.rows(), d);
    for (size_t i = 0; i < z.rows(); ++i)
        for (size_t j = 0; j < d; ++j) {
            double s = model.mean[j];
            for (size_t c = 0; c < k; ++c) s += z(i, c) * model.components(c, j);
            out(i, j) = s;
        }
    return out;
}

} // namespace uqlearn
