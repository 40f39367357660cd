// SPDX-License-Identifier: MIT
#pragma once

// Dense decompositions backing the higher-level modules: pivoted LU for
// determinants, Cholesky for covariance factors, QR for orthonormal bases
// and SVD for numerical rank. Everything is delegated to Eigen through
// row-major maps; the public surface stays on DenseMatrix.

#include "lext/error.hpp"
#include "lext/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>

namespace lext {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenRowMajor> to_eigen(const DenseMatrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

inline DenseMatrix from_eigen(const EigenRowMajor& e) {
    DenseMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    Eigen::Map<EigenRowMajor>(out.data().data(), e.rows(), e.cols()) = e;
    return out;
}

struct Determinant {
    double value = 0.0;
    double sign = 0.0;     ///< -1, 0 or +1
    double log_abs = 0.0;  ///< log|value|, -inf when singular
};

/// Determinant of a square matrix via pivoted LU, reported both as a plain
/// value and in sign/log-magnitude form for overflow-safe composition.
inline Determinant lu_determinant(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError("determinant of a non-square matrix (" + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ")");
    }
    Eigen::PartialPivLU<EigenRowMajor> lu(to_eigen(m));
    Determinant d;
    d.sign = static_cast<double>(lu.permutationP().determinant());
    d.value = d.sign;
    d.log_abs = 0.0;
    for (Eigen::Index k = 0; k < lu.matrixLU().rows(); ++k) {
        const double pivot = lu.matrixLU()(k, k);
        d.value *= pivot;
        d.log_abs += std::log(std::fabs(pivot));
        if (pivot < 0.0) d.sign = -d.sign;
        if (pivot == 0.0) d.sign = 0.0;
    }
    if (d.sign == 0.0 || d.value == 0.0) {
        d.value = 0.0;
        d.sign = 0.0;
        d.log_abs = -std::numeric_limits<double>::infinity();
    }
    return d;
}

/// Lower-triangular Cholesky factor L with m = L L^T, or nullopt when the
/// matrix is not (numerically) positive definite.
inline std::optional<DenseMatrix> cholesky_lower(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        return std::nullopt;
    }
    Eigen::LLT<EigenRowMajor> llt(to_eigen(m));
    if (llt.info() != Eigen::Success) {
        return std::nullopt;
    }
    EigenRowMajor l = llt.matrixL();
    return from_eigen(l);
}

/// Inverse of a lower-triangular matrix by forward substitution.
inline DenseMatrix invert_lower_triangular(const DenseMatrix& l) {
    if (l.rows() != l.cols() || l.rows() == 0) {
        throw ShapeError("triangular inverse of a non-square matrix");
    }
    const std::size_t n = l.rows();
    DenseMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        inv(c, c) = 1.0 / l(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t k = c; k < r; ++k) acc += l(r, k) * inv(k, c);
            inv(r, c) = -acc / l(r, r);
        }
    }
    return inv;
}

/// Numerical rank: number of singular values above rel_threshold times the
/// largest singular value.
inline std::size_t numerical_rank(const DenseMatrix& m, double rel_threshold = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<EigenRowMajor> svd(to_eigen(m));
    svd.setThreshold(rel_threshold);
    return static_cast<std::size_t>(svd.rank());
}

/// Orthonormal n x n matrix from the QR factorization of the given square
/// matrix (used to generate random orthogonal transforms).
inline DenseMatrix orthonormalize(const DenseMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError("orthonormalize expects a square matrix");
    }
    Eigen::HouseholderQR<EigenRowMajor> qr(to_eigen(m));
    EigenRowMajor q = qr.householderQ() * EigenRowMajor::Identity(
                                              static_cast<Eigen::Index>(m.rows()),
                                              static_cast<Eigen::Index>(m.cols()));
    return from_eigen(q);
}

}  // namespace lext
