#pragma once

#include "uqlearn/tensor.hpp"

namespace uqlearn {

// Principal component analysis. components holds k unit-norm rows; the sign
// of each row is canonicalized (largest-magnitude entry positive) so fits
// are bit-deterministic.
struct PcaModel {
    std::vector<double> mean;
    Matrix components;                      // k x d
    std::vector<double> explained_variance; // descending, length k
};

// Top-k eigenvectors of the sample covariance (1/(n-1) normalization). When
// cols > rows the n x n Gram eigenproblem is solved instead of the d x d one.
PcaModel fit_pca(const Matrix& x, size_t k);

// (x - mean) . components^T, giving k columns.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

// mean + z . components; right inverse of pca_transform on the fitted span.
Matrix pca_inverse(const PcaModel& model, const Matrix& z);

} // namespace uqlearn
