#include "uqlearn/mlp_net.hpp"

#include <algorithm>
#include <cmath>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {
double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }
} // namespace

MlpNet::MlpNet(size_t input_dim, size_t hidden_units)
    : input_dim_(input_dim), hidden_(hidden_units), w1_len_(hidden_units * input_dim) {
    if (input_dim_ == 0 || hidden_ == 0)
        throw ValidationError("MlpNet: input_dim and hidden_units must be >= 1");
    params_.assign(w1_len_ + hidden_ + 2 * hidden_ + 2, 0.0);
}

void MlpNet::init_glorot(Rng& rng) {
    const double lim1 = std::sqrt(6.0 / static_cast<double>(input_dim_ + hidden_));
    for (size_t i = 0; i < w1_len_; ++i) params_[i] = rng.uniform(-lim1, lim1);
    const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden_ + 2));
    for (size_t c = 0; c < 2; ++c)
        for (size_t u = 0; u < hidden_; ++u) params_[w2_at(c, u)] = rng.uniform(-lim2, lim2);
    // biases stay zero
}

void MlpNet::hidden_activations(std::span<const double> x, std::vector<double>& h) const {
    h.resize(hidden_);
    for (size_t u = 0; u < hidden_; ++u) {
        double a = params_[b1_at(u)];
        const double* wrow = params_.data() + w1_at(u, 0);
        for (size_t i = 0; i < input_dim_; ++i) a += wrow[i] * x[i];
        h[u] = logistic(a);
    }
}

void MlpNet::forward(std::span<const double> x, double out[2]) const {
    std::vector<double> h;
    hidden_activations(x, h);
    double z[2];
    for (size_t c = 0; c < 2; ++c) {
        double a = params_[b2_at(c)];
        for (size_t u = 0; u < hidden_; ++u) a += params_[w2_at(c, u)] * h[u];
        z[c] = a;
    }
    const double m = std::max(z[0], z[1]);
    const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
    out[0] = e0 / (e0 + e1);
    out[1] = e1 / (e0 + e1);
}

double MlpNet::loss(const std::vector<std::span<const double>>& batch,
                    std::span<const int> labels) const {
    double total = 0.0;
    double p[2];
    for (size_t s = 0; s < batch.size(); ++s) {
        forward(batch[s], p);
        total += -std::log(std::max(p[labels[s]], 1e-300));
    }
    return total / static_cast<double>(batch.size());
}

std::vector<double> MlpNet::gradient(const std::vector<std::span<const double>>& batch,
                                     std::span<const int> labels) const {
    std::vector<double> grad(params_.size(), 0.0);
    std::vector<double> h;
    const double inv_n = 1.0 / static_cast<double>(batch.size());

    for (size_t s = 0; s < batch.size(); ++s) {
        const std::span<const double> x = batch[s];
        hidden_activations(x, h);
        double z[2];
        for (size_t c = 0; c < 2; ++c) {
            double a = params_[b2_at(c)];
            for (size_t u = 0; u < hidden_; ++u) a += params_[w2_at(c, u)] * h[u];
            z[c] = a;
        }
        const double m = std::max(z[0], z[1]);
        const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
        const double p0 = e0 / (e0 + e1), p1 = e1 / (e0 + e1);

        // dL/dz = softmax - onehot(label), averaged over the batch
        const double dz[2] = {(p0 - (labels[s] == 0 ? 1.0 : 0.0)) * inv_n,
                              (p1 - (labels[s] == 1 ? 1.0 : 0.0)) * inv_n};
        for (size_t c = 0; c < 2; ++c) {
            grad[b2_at(c)] += dz[c];
            for (size_t u = 0; u < hidden_; ++u) grad[w2_at(c, u)] += dz[c] * h[u];
        }
        for (size_t u = 0; u < hidden_; ++u) {
            const double dh = params_[w2_at(0, u)] * dz[0] + params_[w2_at(1, u)] * dz[1];
            const double da = dh * h[u] * (1.0 - h[u]);
            grad[b1_at(u)] += da;
            double* wgrad = grad.data() + w1_at(u, 0);
            for (size_t i = 0; i < input_dim_; ++i) wgrad[i] += da * x[i];
        }
    }
    return grad;
}

void MlpNet::apply_gradient(std::span<const double> grad, double learning_rate) {
    for (size_t i = 0; i < params_.size(); ++i) params_[i] -= learning_rate * grad[i];
}

} // namespace uqlearn
