#include "uqlearn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uqlearn/errors.hpp"
#include "uqlearn/parallel.hpp"

namespace uqlearn {

namespace {

std::string shape_str(size_t r, size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

void check_finite(const std::vector<double>& data, const char* what) {
    for (double v : data) {
        if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite entry");
    }
}

} // namespace

Matrix::Matrix(size_t rows, size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw ShapeError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + shape_str(rows_, cols_));
    check_finite(data_, "Matrix");
}

Tensor4::Tensor4(size_t n, size_t c, size_t h, size_t w, std::vector<double> data)
    : n_(n), c_(c), h_(h), w_(w), data_(std::move(data)) {
    if (data_.size() != n_ * c_ * h_ * w_)
        throw ShapeError("Tensor4: data length " + std::to_string(data_.size()) +
                         " does not match n*c*h*w");
    check_finite(data_, "Tensor4");
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: incompatible shapes " + shape_str(a.rows(), a.cols()) +
                         " and " + shape_str(b.rows(), b.cols()));
    Matrix out(a.rows(), b.cols(), 0.0);
    // i-k-j order keeps the inner loop streaming over contiguous rows.
    for (size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.data().data() + i * a.cols();
        double* orow = out.data().data() + i * b.cols();
        for (size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.data().data() + k * b.cols();
            for (size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Tensor4 conv2d(const Tensor4& input, const Tensor4& kernels, std::span<const double> bias,
               size_t stride, size_t padding) {
    if (stride < 1) throw ValidationError("conv2d: stride must be >= 1");
    if (kernels.c() != input.c())
        throw ShapeError("conv2d: kernel expects " + std::to_string(kernels.c()) +
                         " input channels, input has " + std::to_string(input.c()));
    if (bias.size() != kernels.n())
        throw ShapeError("conv2d: bias length " + std::to_string(bias.size()) +
                         " does not match " + std::to_string(kernels.n()) + " output channels");

    const size_t kh = kernels.h(), kw = kernels.w();
    const size_t ph = input.h() + 2 * padding, pw = input.w() + 2 * padding;
    if (kh > ph || kw > pw)
        throw ShapeError("conv2d: kernel " + shape_str(kh, kw) + " larger than padded input " +
                         shape_str(ph, pw));
    const size_t oh = (ph - kh) / stride + 1;
    const size_t ow = (pw - kw) / stride + 1;

    Tensor4 out(input.n(), kernels.n(), oh, ow);
    const long ipad = static_cast<long>(padding);

    // One work item per (image, output channel); each writes a disjoint plane.
    parallel_for(input.n() * kernels.n(), [&](size_t item) {
        const size_t img = item / kernels.n();
        const size_t oc = item % kernels.n();
        for (size_t oy = 0; oy < oh; ++oy) {
            for (size_t ox = 0; ox < ow; ++ox) {
                double acc = bias[oc];
                const long y0 = static_cast<long>(oy * stride) - ipad;
                const long x0 = static_cast<long>(ox * stride) - ipad;
                for (size_t ic = 0; ic < input.c(); ++ic) {
                    for (size_t ky = 0; ky < kh; ++ky) {
                        const long y = y0 + static_cast<long>(ky);
                        if (y < 0 || y >= static_cast<long>(input.h())) continue;
                        for (size_t kx = 0; kx < kw; ++kx) {
                            const long x = x0 + static_cast<long>(kx);
                            if (x < 0 || x >= static_cast<long>(input.w())) continue;
                            acc += input.at(img, ic, static_cast<size_t>(y), static_cast<size_t>(x)) *
                                   kernels.at(oc, ic, ky, kx);
                        }
                    }
                }
                out.at(img, oc, oy, ox) = acc;
            }
        }
    });
    return out;
}

Tensor4 maxpool2d(const Tensor4& input, size_t size, size_t stride) {
    if (stride < 1) throw ValidationError("maxpool2d: stride must be >= 1");
    if (size > input.h() || size > input.w())
        throw ShapeError("maxpool2d: window " + std::to_string(size) + " exceeds input " +
                         shape_str(input.h(), input.w()));
    const size_t oh = (input.h() - size) / stride + 1;
    const size_t ow = (input.w() - size) / stride + 1;

    Tensor4 out(input.n(), input.c(), oh, ow);
    for (size_t img = 0; img < input.n(); ++img) {
        for (size_t ch = 0; ch < input.c(); ++ch) {
            for (size_t oy = 0; oy < oh; ++oy) {
                for (size_t ox = 0; ox < ow; ++ox) {
                    double best = input.at(img, ch, oy * stride, ox * stride);
                    for (size_t ky = 0; ky < size; ++ky)
                        for (size_t kx = 0; kx < size; ++kx)
                            best = std::max(best, input.at(img, ch, oy * stride + ky, ox * stride + kx));
                    out.at(img, ch, oy, ox) = best;
                }
            }
        }
    }
    return out;
}

Tensor4 relu(const Tensor4& input) {
    Tensor4 out = input;
    for (double& v : out.data()) v = std::max(v, 0.0);
    return out;
}

EighResult eigh(const Matrix& a) {
    const size_t n = a.rows();
    if (n == 0 || n != a.cols())
        throw ShapeError("eigh: matrix must be square, got " + shape_str(a.rows(), a.cols()));

    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    const double sym_tol = 1e-9 * std::max(1.0, scale);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > sym_tol)
                throw ValidationError("eigh: matrix not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");

    Matrix work = a;
    // Symmetrize exactly so rotations stay consistent.
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double v = 0.5 * (work(i, j) + work(j, i));
            work(i, j) = v;
            work(j, i) = v;
        }

    Matrix v(n, n, 0.0);
    for (size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const double stop = 1e-14 * std::max(1.0, scale);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(work(p, q)));
        if (off <= stop) break;

        for (size_t p = 0; p < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                const double apq = work(p, q);
                if (std::abs(apq) <= stop) continue;
                const double app = work(p, p), aqq = work(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (size_t i = 0; i < n; ++i) {
                    const double aip = work(i, p), aiq = work(i, q);
                    work(i, p) = c * aip - s * aiq;
                    work(i, q) = s * aip + c * aiq;
                }
                for (size_t i = 0; i < n; ++i) {
                    const double api = work(p, i), aqi = work(q, i);
                    work(p, i) = c * api - s * aqi;
                    work(q, i) = s * api + c * aqi;
                }
                for (size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t lhs, size_t rhs) { return work(lhs, lhs) > work(rhs, rhs); });

    EighResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors = Matrix(n, n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        result.eigenvalues[k] = work(order[k], order[k]);
        for (size_t i = 0; i < n; ++i) result.eigenvectors(i, k) = v(i, order[k]);
    }
    return result;
}

Matrix cholesky_lower(const Matrix& a) {
    const size_t n = a.rows();
    if (n != a.cols()) throw ShapeError("cholesky: matrix must be square");
    Matrix l(n, n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw ValidationError("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

std::vector<double> solve_lower(const Matrix& l, std::span<const double> b) {
    const size_t n = l.rows();
    if (b.size() != n) throw ShapeError("solve_lower: size mismatch");
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

std::vector<double> solve_lower_transposed(const Matrix& l, std::span<const double> b) {
    const size_t n = l.rows();
    if (b.size() != n) throw ShapeError("solve_lower_transposed: size mismatch");
    std::vector<double> x(n);
    for (size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

namespace {
int g_workers = 1;
}

int worker_count() { return g_workers; }
void set_worker_count(int n) { g_workers = n < 1 ? 1 : n; }

} // namespace uqlearn
