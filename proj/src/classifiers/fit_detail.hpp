#pragma once

// Internal per-kind fit entry points; the public dispatch lives in common.cpp.

#include <cmath>
#include <memory>

#include "uqlearn/classifier.hpp"

namespace uqlearn::detail {

std::unique_ptr<TrainedModel> fit_knn(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_linear_svm(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_rbf_svm(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_gp(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_mlp(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_forest(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_adaboost(const ClassifierConfig&, const LabeledDataset&);
std::unique_ptr<TrainedModel> fit_gnb(const ClassifierConfig&, const LabeledDataset&);

inline double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

} // namespace uqlearn::detail
