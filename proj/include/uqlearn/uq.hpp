#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uqlearn/classifier.hpp"
#include "uqlearn/data.hpp"

namespace uqlearn {

struct EnsembleConfig {
    size_t n_models = 20;
    size_t hidden_min = 50;
    size_t hidden_max = 400;
    int epochs = 200;
    double learning_rate = 0.01;
    int batch_size = 16;
    uint64_t base_seed = 0;

    void validate() const; // n_models >= 2, hidden_min <= hidden_max
};

// Member networks of the uncertainty ensemble, all trained on the same data
// with per-member hidden sizes and seeds derived from base_seed.
struct Ensemble {
    std::vector<size_t> hidden_sizes;
    std::vector<std::unique_ptr<TrainedModel>> members;

    size_t size() const { return members.size(); }
    size_t input_dim() const;
};

// Member i draws its hidden size and training seed from
// base_seed ^ splitmix64(i); members fit independently (in parallel when a
// worker pool is configured) with bit-identical results either way.
Ensemble build_ensemble(const LabeledDataset& train, const EnsembleConfig& config);

// Arithmetic mean of the member predictive distributions.
ProbabilityPrediction mean_predictive(const Ensemble& ensemble, std::span<const double> x);

// -sum p_i ln p_i in nats, with 0 ln 0 = 0. Zero at full confidence, ln 2 at
// a 0.5/0.5 binary split.
double predictive_entropy(const ProbabilityPrediction& p);

struct EntropyField {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    size_t nx = 0, ny = 0;
    Matrix values; // ny rows, nx cols; values[i][j] at cell center (j, i)

    double cell_center_x(size_t j) const;
    double cell_center_y(size_t i) const;
};

// Entropy of the ensemble mean prediction at every cell center of a 2D grid.
// The ensemble must consume 2-dimensional (PCA-reduced) inputs.
EntropyField entropy_field(const Ensemble& ensemble2d, double x_min, double x_max, double y_min,
                           double y_max, size_t nx, size_t ny);

// CSV grid plus a JSON sidecar carrying bounds and resolution.
void save_entropy_field(const EntropyField& field, const std::string& csv_path,
                        const std::string& json_path);
EntropyField load_entropy_field(const std::string& csv_path, const std::string& json_path);

} // namespace uqlearn
