#pragma once

#include <cstddef>
#include <vector>

#include "weatlab/error.hpp"

namespace weatlab {

/// Minimal dense row-major matrix of doubles.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }

    Mat transposed() const;
    double frobenius_norm() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);

struct SvdResult {
    Mat u;                       // n x n, orthonormal columns
    std::vector<double> sigma;   // non-negative, non-increasing
    Mat v;                       // n x n, orthonormal columns; A = U diag(sigma) V^T
    std::size_t sweeps = 0;
};

/// One-sided Jacobi SVD of a square matrix. Throws on non-finite input
/// or non-convergence (with the sweep count in the message).
SvdResult svd(const Mat& a);

} // namespace weatlab
