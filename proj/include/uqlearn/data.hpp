#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uqlearn/tensor.hpp"

namespace uqlearn {

// Feature rows plus binary labels. Label 1 is the positive (Covid) class,
// label 0 the negative (non-Covid) class.
struct LabeledDataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> ids;

    size_t size() const { return labels.size(); }
    size_t dim() const { return features.cols(); }
    size_t count_label(int label) const;
    void validate() const;
};

struct SplitSpec {
    double test_fraction = 0.2;
    bool stratified = true;
    uint64_t seed = 0;
};

// CSV contract: header "id,f0,...,f{d-1},label", '.' decimal separator,
// label column last with values 0 or 1.
LabeledDataset load_feature_csv(const std::string& path);
void save_feature_csv(const LabeledDataset& ds, const std::string& path);

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, const SplitSpec& spec);

// Two spherical Gaussian classes at +/- (separation/2) * 1/sqrt(dim) per
// coordinate, so the class-mean distance equals `separation`. Positives
// (label 1) are generated first, then negatives.
LabeledDataset synth_gaussian(size_t n_pos, size_t n_neg, size_t dim, double separation,
                              uint64_t seed);

} // namespace uqlearn
