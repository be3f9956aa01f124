#pragma once

// Concrete fitted-model types. Exposed so the CMDL serializer and the test
// oracles (KKT checks, gradient checks, hand-built ensembles) can reach the
// fitted parameters; ordinary callers only need classifier.hpp.

#include <vector>

#include "uqlearn/classifier.hpp"
#include "uqlearn/mlp_net.hpp"
#include "uqlearn/tensor.hpp"

namespace uqlearn {

class KnnModel : public TrainedModel {
public:
    KnnModel(Matrix train_x, std::vector<int> labels, int k, double p);

    // Exact 0.5/0.5 votes resolve to the nearer neighbor's class.
    int predict_label(std::span<const double> x) const override;

    const Matrix& train_x() const { return train_x_; }
    const std::vector<int>& labels() const { return labels_; }
    int k() const { return k_; }
    double p() const { return p_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    // Indices of the k nearest training rows, ordered by (distance, index).
    std::vector<size_t> nearest(std::span<const double> x) const;

    Matrix train_x_;
    std::vector<int> labels_;
    int k_;
    double p_;
};

class LinearSvmModel : public TrainedModel {
public:
    LinearSvmModel(std::vector<double> weights, double bias, std::vector<double> alpha);

    double decision_score(std::span<const double> x) const override; // raw margin

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    // Dual coefficients in training-row order (KKT diagnostics; not serialized).
    const std::vector<double>& alpha() const { return alpha_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    std::vector<double> weights_;
    double bias_;
    std::vector<double> alpha_;
};

class RbfSvmModel : public TrainedModel {
public:
    RbfSvmModel(Matrix support_x, std::vector<double> coef, double bias, double sigma,
                bool unsquared);

    double decision_score(std::span<const double> x) const override; // raw margin

    const Matrix& support_x() const { return support_x_; }
    const std::vector<double>& coef() const { return coef_; } // alpha_i * y_i
    double bias() const { return bias_; }
    double sigma() const { return sigma_; }
    bool unsquared() const { return unsquared_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    Matrix support_x_;
    std::vector<double> coef_;
    double bias_;
    double sigma_;
    bool unsquared_;
};

class GpModel : public TrainedModel {
public:
    GpModel(Matrix train_x, std::vector<double> grad, double sigma, bool unsquared);

    const Matrix& train_x() const { return train_x_; }
    const std::vector<double>& grad() const { return grad_; } // t - pi at the Laplace mode
    double sigma() const { return sigma_; }
    bool unsquared() const { return unsquared_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    Matrix train_x_;
    std::vector<double> grad_;
    double sigma_;
    bool unsquared_;
};

class MlpModel : public TrainedModel {
public:
    explicit MlpModel(MlpNet net);

    const MlpNet& net() const { return net_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    MlpNet net_;
};

// Binary decision tree stored as a flat node array; feature < 0 marks a leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    int predict(std::span<const double> x) const;
};

class ForestModel : public TrainedModel {
public:
    ForestModel(size_t input_dim, std::vector<DecisionTree> trees);

    const std::vector<DecisionTree>& trees() const { return trees_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    std::vector<DecisionTree> trees_;
};

// Decision stump: votes polarity if x[feature] > threshold, else -polarity
// (polarity in {-1, +1}, votes are the signed classes -1 -> 0, +1 -> 1).
struct Stump {
    int feature = 0;
    double threshold = 0.0;
    int polarity = 1;
    int vote(std::span<const double> x) const {
        return x[static_cast<size_t>(feature)] > threshold ? polarity : -polarity;
    }
};

class AdaBoostModel : public TrainedModel {
public:
    AdaBoostModel(size_t input_dim, std::vector<Stump> stumps, std::vector<double> alphas);

    const std::vector<Stump>& stumps() const { return stumps_; }
    const std::vector<double>& alphas() const { return alphas_; }
    double margin(std::span<const double> x) const; // sum alpha_m h_m(x)

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    std::vector<Stump> stumps_;
    std::vector<double> alphas_;
};

class GnbModel : public TrainedModel {
public:
    // prior[c], mean[c], var[c] per class c in {0, 1}; variances pre-floored.
    GnbModel(std::vector<double> prior, Matrix mean, Matrix var);

    const std::vector<double>& prior() const { return prior_; }
    const Matrix& mean() const { return mean_; }
    const Matrix& var() const { return var_; }

protected:
    ProbabilityPrediction do_predict(std::span<const double> x) const override;

private:
    std::vector<double> prior_;
    Matrix mean_; // 2 x d
    Matrix var_;  // 2 x d
};

} // namespace uqlearn
