#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace uqlearn {

// Dense row-major matrix of doubles. The carrier for feature tables and
// kernel matrices throughout the library.
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(size_t rows, size_t cols, std::vector<double> data);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense 4D tensor in (n, c, h, w) order: image batches and feature maps.
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(size_t n, size_t c, size_t h, size_t w, double fill = 0.0)
        : n_(n), c_(c), h_(h), w_(w), data_(n * c * h * w, fill) {}
    Tensor4(size_t n, size_t c, size_t h, size_t w, std::vector<double> data);

    size_t n() const { return n_; }
    size_t c() const { return c_; }
    size_t h() const { return h_; }
    size_t w() const { return w_; }
    size_t size() const { return data_.size(); }

    double& at(size_t n, size_t c, size_t y, size_t x) {
        return data_[((n * c_ + c) * h_ + y) * w_ + x];
    }
    double at(size_t n, size_t c, size_t y, size_t x) const {
        return data_[((n * c_ + c) * h_ + y) * w_ + x];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Tensor4& other) const = default;

private:
    size_t n_ = 0, c_ = 0, h_ = 0, w_ = 0;
    std::vector<double> data_;
};

// Standard matrix product. Throws ShapeError naming both shapes on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

// 2D cross-correlation (no kernel flip) with zero padding. kernels is
// (out_c, in_c, kh, kw); bias has one entry per output channel. Output
// spatial dims are floor((h + 2*padding - kh)/stride) + 1.
Tensor4 conv2d(const Tensor4& input, const Tensor4& kernels, std::span<const double> bias,
               size_t stride, size_t padding);

// Channelwise max over size x size windows advancing by stride.
Tensor4 maxpool2d(const Tensor4& input, size_t size, size_t stride);

// Elementwise max(x, 0).
Tensor4 relu(const Tensor4& input);

struct EighResult {
    std::vector<double> eigenvalues; // descending
    Matrix eigenvectors;             // column i pairs with eigenvalues[i]
};

// Symmetric eigendecomposition by cyclic Jacobi rotations. Input must be
// square and symmetric within 1e-9 relative to its largest entry.
EighResult eigh(const Matrix& a);

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Support routine for the Gaussian-process classifier.
Matrix cholesky_lower(const Matrix& a);

// Solve L y = b (forward) and L^T x = y (backward) for lower-triangular L.
std::vector<double> solve_lower(const Matrix& l, std::span<const double> b);
std::vector<double> solve_lower_transposed(const Matrix& l, std::span<const double> b);

double dot(std::span<const double> x, std::span<const double> y);

} // namespace uqlearn
