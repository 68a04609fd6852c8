#include "weatlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace weatlab {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw Error("matrix product: shape mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error("matrix difference: shape mismatch");
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

SvdResult svd(const Mat& a) {
    if (a.rows() != a.cols()) throw Error("svd: square matrix required");
    const std::size_t n = a.rows();
    for (double v : a.data())
        if (!std::isfinite(v)) throw Error("svd: non-finite input entry");

    // One-sided Jacobi: rotate column pairs of B until all columns are
    // mutually orthogonal; then B = U diag(sigma) and V collects rotations.
    Mat b = a;
    Mat v = Mat::identity(n);
    const double tol = 1e-15;
    const std::size_t max_sweeps = 100;
    std::size_t sweeps = 0;
    bool converged = (n <= 1);

    while (!converged && sweeps < max_sweeps) {
        ++sweeps;
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += b(i, p) * b(i, p);
                    beta += b(i, q) * b(i, q);
                    gamma += b(i, p) * b(i, q);
                }
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = std::copysign(1.0, zeta) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double bp = b(i, p), bq = b(i, q);
                    b(i, p) = c * bp - s * bq;
                    b(i, q) = s * bp + c * bq;
                    double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
    }
    if (!converged)
        throw Error("svd: no convergence after " + std::to_string(sweeps) + " sweeps");

    SvdResult result;
    result.sweeps = sweeps;
    result.sigma.assign(n, 0.0);
    result.u = Mat(n, n);
    result.v = v;

    std::vector<std::size_t> order(n);
    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += b(i, j) * b(i, j);
        norms[j] = std::sqrt(acc);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    Mat v_sorted(n, n);
    const double rank_tol = a.frobenius_norm() * 1e-14;
    for (std::size_t jj = 0; jj < n; ++jj) {
        std::size_t j = order[jj];
        result.sigma[jj] = norms[j];
        for (std::size_t i = 0; i < n; ++i) v_sorted(i, jj) = v(i, j);
        if (norms[j] > rank_tol) {
            for (std::size_t i = 0; i < n; ++i) result.u(i, jj) = b(i, j) / norms[j];
        }
    }
    result.v = v_sorted;

    // Complete U for any (near-)null columns by Gram-Schmidt against the
    // columns already placed.
    for (std::size_t jj = 0; jj < n; ++jj) {
        if (result.sigma[jj] > rank_tol) continue;
        result.sigma[jj] = std::max(result.sigma[jj], 0.0);
        for (std::size_t seed = 0; seed < n; ++seed) {
            std::vector<double> cand(n, 0.0);
            cand[seed] = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == jj || (result.sigma[k] <= rank_tol && k > jj)) continue;
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += cand[i] * result.u(i, k);
                for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * result.u(i, k);
            }
            double norm = 0.0;
            for (double x : cand) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 0.5) {
                for (std::size_t i = 0; i < n; ++i) result.u(i, jj) = cand[i] / norm;
                break;
            }
        }
    }

    return result;
}

} // namespace weatlab
