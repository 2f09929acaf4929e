#ifndef DISENT_MATRIX_HPP
#define DISENT_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "disent/errors.hpp"
#include "disent/rng.hpp"

namespace disent {

// Row-major dense matrix of doubles. Plain value type; all numeric
// entry points below keep entries finite or throw NumericError.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static DenseMatrix gaussian(std::size_t rows, std::size_t cols, double stddev, RngState& rng) {
        DenseMatrix m(rows, cols);
        rng.normal_fill(m.a_);
        for (double& x : m.a_) x *= stddev;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    std::span<double> flat() { return a_; }
    std::span<const double> flat() const { return a_; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    void fill(double v) { std::fill(a_.begin(), a_.end(), v); }

    void resize(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        a_.assign(rows * cols, 0.0);
    }

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool all_finite() const {
        for (double x : a_)
            if (!std::isfinite(x)) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

namespace detail {

inline std::string shape_str(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

inline void require_dims(bool ok, const char* op, std::size_t r1, std::size_t c1,
                         std::size_t r2, std::size_t c2) {
    if (!ok) {
        throw DimError(std::string(op) + ": incompatible shapes " + shape_str(r1, c1) +
                       " and " + shape_str(r2, c2));
    }
}

}  // namespace detail

// C = A * B (or C += when accumulate). A is m x k, B is k x n.
// k unrolled by 4 so each pass over a C row does four fused
// multiply-adds per load/store; inner j loop vectorizes.
inline void gemm_nn(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& C,
                    bool accumulate = false) {
    detail::require_dims(A.cols() == B.rows(), "gemm_nn", A.rows(), A.cols(), B.rows(), B.cols());
    const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
    if (C.rows() != m || C.cols() != n) C.resize(m, n);
    if (!accumulate) C.fill(0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = A.row(i);
        double* ci = C.row(i);
        std::size_t p = 0;
        for (; p + 4 <= k; p += 4) {
            const double a0 = ai[p], a1 = ai[p + 1], a2 = ai[p + 2], a3 = ai[p + 3];
            const double* b0 = B.row(p);
            const double* b1 = B.row(p + 1);
            const double* b2 = B.row(p + 2);
            const double* b3 = B.row(p + 3);
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
            }
        }
        for (; p < k; ++p) {
            const double a0 = ai[p];
            const double* b0 = B.row(p);
            for (std::size_t j = 0; j < n; ++j) ci[j] += a0 * b0[j];
        }
    }
}

// C = A * B^T (or C += when accumulate). A is m x k, B is n x k.
// Processes four B rows at once with eight independent accumulator
// lanes each, then reduces in a fixed order.
inline void gemm_nt(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& C,
                    bool accumulate = false) {
    detail::require_dims(A.cols() == B.cols(), "gemm_nt", A.rows(), A.cols(), B.rows(), B.cols());
    const std::size_t m = A.rows(), k = A.cols(), n = B.rows();
    if (C.rows() != m || C.cols() != n) C.resize(m, n);
    if (!accumulate) C.fill(0.0);

    constexpr std::size_t kLanes = 8;
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = A.row(i);
        double* ci = C.row(i);
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const double* b0 = B.row(j);
            const double* b1 = B.row(j + 1);
            const double* b2 = B.row(j + 2);
            const double* b3 = B.row(j + 3);
            double acc0[kLanes] = {0}, acc1[kLanes] = {0}, acc2[kLanes] = {0}, acc3[kLanes] = {0};
            std::size_t p = 0;
            for (; p + kLanes <= k; p += kLanes) {
                for (std::size_t u = 0; u < kLanes; ++u) {
                    const double a = ai[p + u];
                    acc0[u] += a * b0[p + u];
                    acc1[u] += a * b1[p + u];
                    acc2[u] += a * b2[p + u];
                    acc3[u] += a * b3[p + u];
                }
            }
            double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
            for (std::size_t u = 0; u < kLanes; ++u) {
                s0 += acc0[u];
                s1 += acc1[u];
                s2 += acc2[u];
                s3 += acc3[u];
            }
            for (; p < k; ++p) {
                const double a = ai[p];
                s0 += a * b0[p];
                s1 += a * b1[p];
                s2 += a * b2[p];
                s3 += a * b3[p];
            }
            if (accumulate) {
                ci[j] += s0;
                ci[j + 1] += s1;
                ci[j + 2] += s2;
                ci[j + 3] += s3;
            } else {
                ci[j] = s0;
                ci[j + 1] = s1;
                ci[j + 2] = s2;
                ci[j + 3] = s3;
            }
        }
        for (; j < n; ++j) {
            const double* bj = B.row(j);
            double acc[kLanes] = {0};
            std::size_t p = 0;
            for (; p + kLanes <= k; p += kLanes)
                for (std::size_t u = 0; u < kLanes; ++u) acc[u] += ai[p + u] * bj[p + u];
            double s = 0;
            for (std::size_t u = 0; u < kLanes; ++u) s += acc[u];
            for (; p < k; ++p) s += ai[p] * bj[p];
            if (accumulate)
                ci[j] += s;
            else
                ci[j] = s;
        }
    }
}

inline DenseMatrix transposed(const DenseMatrix& A) {
    DenseMatrix T(A.cols(), A.rows());
    constexpr std::size_t kBlock = 32;
    for (std::size_t i0 = 0; i0 < A.rows(); i0 += kBlock)
        for (std::size_t j0 = 0; j0 < A.cols(); j0 += kBlock) {
            const std::size_t iM = std::min(i0 + kBlock, A.rows());
            const std::size_t jM = std::min(j0 + kBlock, A.cols());
            for (std::size_t i = i0; i < iM; ++i)
                for (std::size_t j = j0; j < jM; ++j) T(j, i) = A(i, j);
        }
    return T;
}

// y = W*x + b
inline std::vector<double> affine_forward(const DenseMatrix& W, std::span<const double> b,
                                          std::span<const double> x) {
    detail::require_dims(W.cols() == x.size(), "affine_forward", W.rows(), W.cols(), x.size(), 1);
    detail::require_dims(W.rows() == b.size(), "affine_forward(bias)", W.rows(), W.cols(),
                         b.size(), 1);
    std::vector<double> y(W.rows());
    for (std::size_t i = 0; i < W.rows(); ++i) {
        const double* wi = W.row(i);
        double acc[8] = {0};
        std::size_t p = 0;
        const std::size_t k = W.cols();
        for (; p + 8 <= k; p += 8)
            for (std::size_t u = 0; u < 8; ++u) acc[u] += wi[p + u] * x[p + u];
        double s = 0;
        for (std::size_t u = 0; u < 8; ++u) s += acc[u];
        for (; p < k; ++p) s += wi[p] * x[p];
        y[i] = s + b[i];
    }
    return y;
}

struct AffineGrads {
    DenseMatrix grad_w;
    std::vector<double> grad_b;
    std::vector<double> grad_x;
};

// Exact gradients of affine_forward under cotangent `upstream`:
//   dW = upstream * x^T, db = upstream, dx = W^T * upstream.
inline AffineGrads affine_backward(const DenseMatrix& W, std::span<const double> b,
                                   std::span<const double> x, std::span<const double> upstream) {
    detail::require_dims(W.cols() == x.size(), "affine_backward", W.rows(), W.cols(), x.size(), 1);
    detail::require_dims(W.rows() == upstream.size(), "affine_backward(upstream)", W.rows(),
                         W.cols(), upstream.size(), 1);
    (void)b;
    AffineGrads g;
    g.grad_w.resize(W.rows(), W.cols());
    g.grad_b.assign(upstream.begin(), upstream.end());
    g.grad_x.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < W.rows(); ++i) {
        const double u = upstream[i];
        const double* wi = W.row(i);
        double* gw = g.grad_w.row(i);
        for (std::size_t j = 0; j < W.cols(); ++j) {
            gw[j] = u * x[j];
            g.grad_x[j] += u * wi[j];
        }
    }
    return g;
}

}  // namespace disent

#endif
