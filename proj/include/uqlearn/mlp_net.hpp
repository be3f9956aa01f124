#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uqlearn/rng.hpp"

namespace uqlearn {

// One-hidden-layer network: logistic hidden activation, softmax over the two
// output units, cross-entropy loss. Parameters live in one flat vector
// (W1 | b1 | W2 | b2) so finite-difference checks can perturb them directly.
class MlpNet {
public:
    MlpNet() = default;
    MlpNet(size_t input_dim, size_t hidden_units);

    size_t input_dim() const { return input_dim_; }
    size_t hidden_units() const { return hidden_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    void init_glorot(Rng& rng);

    // Class probabilities (p0, p1) for one input row.
    void forward(std::span<const double> x, double out[2]) const;

    // Mean cross-entropy over the rows of a batch.
    double loss(const std::vector<std::span<const double>>& batch,
                std::span<const int> labels) const;

    // Gradient of loss() with respect to the flat parameter vector.
    std::vector<double> gradient(const std::vector<std::span<const double>>& batch,
                                 std::span<const int> labels) const;

    void apply_gradient(std::span<const double> grad, double learning_rate);

private:
    size_t w1_at(size_t unit, size_t in) const { return unit * input_dim_ + in; }
    size_t b1_at(size_t unit) const { return w1_len_ + unit; }
    size_t w2_at(size_t cls, size_t unit) const { return w1_len_ + hidden_ + cls * hidden_ + unit; }
    size_t b2_at(size_t cls) const { return w1_len_ + hidden_ + 2 * hidden_ + cls; }

    void hidden_activations(std::span<const double> x, std::vector<double>& h) const;

    size_t input_dim_ = 0;
    size_t hidden_ = 0;
    size_t w1_len_ = 0;
    std::vector<double> params_;
};

} // namespace uqlearn
