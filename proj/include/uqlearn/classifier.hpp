#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "uqlearn/data.hpp"

namespace uqlearn {

enum class ClassifierKind : uint8_t {
    knn,
    linear_svm,
    rbf_svm,
    gp,
    mlp,
    random_forest,
    adaboost,
    gnb,
};

const char* kind_name(ClassifierKind kind);
ClassifierKind kind_from_name(const std::string& name);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::knn;
    // knn
    int k = 2;
    double minkowski_p = 2.0;
    // rbf_svm / gp length-scale; unsquared_norm switches the kernel to the
    // exp(-||x-y||/(2 sigma^2)) variant for comparison runs.
    double sigma = 1.0;
    bool unsquared_norm = false;
    // svm
    double c_penalty = 1.0;
    // mlp
    int hidden_units = 100;
    int epochs = 200;
    double learning_rate = 0.01;
    int batch_size = 16;
    // random_forest
    int n_trees = 10;
    // adaboost
    int n_weak = 50;
    uint64_t seed = 0;

    void validate() const;
};

// Two-class probability vector; p1 is the positive (Covid) class.
struct ProbabilityPrediction {
    double p0 = 0.0;
    double p1 = 0.0;

    double operator[](size_t i) const { return i == 0 ? p0 : p1; }
    void validate() const; // each in [0,1], sum within 1e-9 of 1
};

// Fitted classifier. Immutable after fit; safe for concurrent predict calls.
class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    ClassifierKind kind() const { return kind_; }
    size_t input_dim() const { return input_dim_; }

    ProbabilityPrediction predict_proba(std::span<const double> x) const;

    // Monotone score for the positive class: raw margin for the SVMs,
    // positive-class probability otherwise.
    virtual double decision_score(std::span<const double> x) const;

    // argmax of predict_proba; an exact 0.5/0.5 tie resolves to label 0.
    virtual int predict_label(std::span<const double> x) const;

protected:
    TrainedModel(ClassifierKind kind, size_t input_dim) : kind_(kind), input_dim_(input_dim) {}
    virtual ProbabilityPrediction do_predict(std::span<const double> x) const = 0;
    void check_input(std::span<const double> x) const;

private:
    ClassifierKind kind_;
    size_t input_dim_;
};

std::unique_ptr<TrainedModel> fit(const ClassifierConfig& config, const LabeledDataset& train);

// (sum |x_i - y_i|^p)^(1/p); Euclidean at p = 2.
double minkowski_distance(std::span<const double> x, std::span<const double> y, double p);

// exp(-||x-y||^2 / (2 sigma^2)); unsquared = true drops the square on the norm.
double rbf_kernel(std::span<const double> x, std::span<const double> y, double sigma,
                  bool unsquared = false);

// Versioned binary model container (magic "CMDL", same framing as FZWT).
void save_model(const TrainedModel& model, const std::string& path);
std::unique_ptr<TrainedModel> load_model(const std::string& path);

} // namespace uqlearn
