// SPDX-License-Identifier: MIT
#pragma once

// Basis-dependent products (Kronecker, Khatri-Rao, outer), mode-k
// contraction, multilinear operator application, and the derived operators
// built from them (CP Jacobian, Sylvester vectorization, Kronecker
// determinant).

#include "lext/error.hpp"
#include "lext/linalg.hpp"
#include "lext/matrix.hpp"
#include "lext/shape.hpp"
#include "lext/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace lext {

/// Outer product of N vectors: entry at (i_1,...,i_N) is prod_k a^(k)_{i_k}.
inline DenseTensor outer(std::span<const std::vector<double>> vectors) {
    if (vectors.empty()) {
        throw ArgumentError("outer product needs at least one vector");
    }
    std::vector<std::size_t> dims;
    dims.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (v.empty()) throw ArgumentError("outer product vectors must be non-empty");
        dims.push_back(v.size());
    }
    const Shape shape{std::move(dims)};
    DenseTensor out(shape);
    MultiIndex m(shape.order(), 0);
    std::size_t flat = 0;
    do {
        double prod = 1.0;
        for (std::size_t k = 0; k < shape.order(); ++k) prod *= vectors[k][m[k]];
        out[flat++] = prod;
    } while (next_multi_index(shape, m));
    return out;
}

inline DenseTensor outer(std::initializer_list<std::vector<double>> vectors) {
    return outer(std::span<const std::vector<double>>(vectors.begin(), vectors.size()));
}

/// Kronecker product: (p1 p2 x q1 q2) block matrix with block (i,j) = a_ij B.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const double aij = a(i1, j1);
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
                }
            }
        }
    }
    return out;
}

/// Left-associated n-ary Kronecker product. The empty product is the 1x1
/// identity, the unit of the Kronecker algebra.
inline DenseMatrix kron(std::span<const DenseMatrix> mats) {
    DenseMatrix acc(1, 1, {1.0});
    for (const auto& m : mats) acc = kron(acc, m);
    return acc;
}

inline DenseMatrix kron(std::initializer_list<DenseMatrix> mats) {
    return kron(std::span<const DenseMatrix>(mats.begin(), mats.size()));
}

/// Khatri-Rao product: columnwise Kronecker product of two matrices with
/// the same column count.
inline DenseMatrix khatri_rao(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("khatri-rao column count mismatch: " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.cols()));
    }
    DenseMatrix out(a.rows() * b.rows(), a.cols());
    for (std::size_t r = 0; r < a.cols(); ++r) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < b.rows(); ++j) {
                out(i * b.rows() + j, r) = a(i, r) * b(j, r);
            }
        }
    }
    return out;
}

/// Left-associated n-ary Khatri-Rao product of a non-empty list.
inline DenseMatrix khatri_rao(std::span<const DenseMatrix> mats) {
    if (mats.empty()) {
        throw ArgumentError("khatri-rao product needs at least one matrix");
    }
    DenseMatrix acc = mats[0];
    for (std::size_t k = 1; k < mats.size(); ++k) acc = khatri_rao(acc, mats[k]);
    return acc;
}

inline DenseMatrix khatri_rao(std::initializer_list<DenseMatrix> mats) {
    return khatri_rao(std::span<const DenseMatrix>(mats.begin(), mats.size()));
}

/// k-mode product Y •_k U: contracts U's second index with the tensor's
/// k-th mode (0-based k). Output shape replaces n_k by U.rows().
///
/// (Y •_k U)_{i_1..i_N} = sum_j Y_{i_1,..,j,..,i_N} U_{i_k, j}
inline DenseTensor mode_product(const DenseTensor& t, const DenseMatrix& u, std::size_t mode) {
    const Shape& s = t.shape();
    if (mode >= s.order()) {
        throw ArgumentError("mode " + std::to_string(mode + 1) + " out of range for order-" +
                            std::to_string(s.order()) + " tensor");
    }
    if (u.cols() != s.dim(mode)) {
        throw ShapeError("mode " + std::to_string(mode + 1) + " product: matrix has " +
                         std::to_string(u.cols()) + " columns, tensor dimension is " +
                         std::to_string(s.dim(mode)));
    }
    if (u.rows() == 0) {
        throw ShapeError("mode product with an empty matrix");
    }

    std::size_t pre = 1, post = 1;
    for (std::size_t l = 0; l < mode; ++l) pre *= s.dim(l);
    for (std::size_t l = mode + 1; l < s.order(); ++l) post *= s.dim(l);
    const std::size_t n = s.dim(mode);

    std::vector<std::size_t> out_dims(s.dims().begin(), s.dims().end());
    out_dims[mode] = u.rows();
    DenseTensor out{Shape{std::move(out_dims)}};

    // Flat offsets factor as a*(n*post) + j*post + b; sum over j in fixed
    // ascending order so results are bitwise deterministic.
    for (std::size_t a = 0; a < pre; ++a) {
        for (std::size_t r = 0; r < u.rows(); ++r) {
            const std::size_t dst = (a * u.rows() + r) * post;
            for (std::size_t b = 0; b < post; ++b) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    acc += u(r, j) * t[(a * n + j) * post + b];
                }
                out[dst + b] = acc;
            }
        }
    }
    return out;
}

/// Applies one matrix per mode: (⊗_i U_i) Y = Y •_1 U_1 ... •_N U_N.
/// Mode products commute, so they are applied cheapest-first: ascending
/// rows/cols ratio, i.e. the most size-reducing factors go first. The
/// order is a deterministic function of the factor shapes.
inline DenseTensor multilinear_apply(std::span<const DenseMatrix> factors,
                                     const DenseTensor& t) {
    const Shape& s = t.shape();
    if (factors.size() != s.order()) {
        throw ShapeError("multilinear apply: " + std::to_string(factors.size()) +
                         " factors for an order-" + std::to_string(s.order()) + " tensor");
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (factors[k].cols() != s.dim(k)) {
            throw ShapeError("multilinear apply: factor " + std::to_string(k + 1) + " has " +
                             std::to_string(factors[k].cols()) +
                             " columns, tensor dimension is " + std::to_string(s.dim(k)));
        }
    }

    std::vector<std::size_t> order_of_application(factors.size());
    std::iota(order_of_application.begin(), order_of_application.end(), std::size_t{0});
    std::stable_sort(order_of_application.begin(), order_of_application.end(),
                     [&](std::size_t a, std::size_t b) {
                         const double ra = static_cast<double>(factors[a].rows()) /
                                           static_cast<double>(factors[a].cols());
                         const double rb = static_cast<double>(factors[b].rows()) /
                                           static_cast<double>(factors[b].cols());
                         return ra < rb;
                     });

    DenseTensor out = t;
    for (std::size_t k : order_of_application) {
        out = mode_product(out, factors[k], k);
    }
    return out;
}

inline DenseTensor multilinear_apply(std::initializer_list<DenseMatrix> factors,
                                     const DenseTensor& t) {
    return multilinear_apply(std::span<const DenseMatrix>(factors.begin(), factors.size()), t);
}

/// Determinant of a multilinear operator with square factors, evaluated in
/// sign/log-magnitude form.
struct KronDeterminant {
    double value = 0.0;    ///< prod_i det(U_i)^{prod_{j!=i} n_j}; ±inf on overflow
    double sign = 0.0;     ///< -1, 0 or +1
    double log_abs = 0.0;  ///< log|value| (-inf when value is 0)
    bool overflow = false; ///< true when the exact magnitude exceeds double range
};

namespace detail {

// Exact for small integer results, unlike exp(e*log(b)).
inline double pow_integer(double base, std::size_t e) {
    double result = 1.0;
    double b = base;
    while (e > 0) {
        if (e & 1U) result *= b;
        b *= b;
        e >>= 1U;
    }
    return result;
}

}  // namespace detail

/// det(⊗ U_i) = prod_i det(U_i)^{prod_{j != i} n_j}, computed without
/// materializing the Kronecker product. Per-factor determinants use pivoted
/// LU; magnitudes below 1e-300 are treated as exact zeros.
inline KronDeterminant kron_determinant_detail(std::span<const DenseMatrix> factors) {
    if (factors.empty()) {
        throw ArgumentError("kron determinant needs at least one factor");
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].rows() != factors[i].cols() || factors[i].rows() == 0) {
            throw ShapeError("kron determinant: factor " + std::to_string(i + 1) +
                             " is not square (" + std::to_string(factors[i].rows()) + "x" +
                             std::to_string(factors[i].cols()) + ")");
        }
    }

    KronDeterminant result;
    double total_sign = 1.0;
    double total_log = 0.0;
    double direct = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const Determinant det_i = lu_determinant(factors[i]);
        if (det_i.sign == 0.0 || std::fabs(det_i.value) < 1e-300) {
            result.value = 0.0;
            result.sign = 0.0;
            result.log_abs = -std::numeric_limits<double>::infinity();
            return result;
        }
        std::size_t exponent = 1;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (j != i) exponent *= factors[j].rows();
        }
        total_log += static_cast<double>(exponent) * det_i.log_abs;
        if (det_i.sign < 0.0 && (exponent % 2 == 1)) total_sign = -total_sign;
        direct *= detail::pow_integer(det_i.value, exponent);
    }

    result.sign = total_sign;
    result.log_abs = total_log;
    if (total_log > std::log(std::numeric_limits<double>::max())) {
        result.overflow = true;
        result.value = total_sign * std::numeric_limits<double>::infinity();
    } else if (std::isfinite(direct) && direct != 0.0) {
        result.value = direct;  // the direct product is exact in easy cases
    } else {
        result.value = total_sign * std::exp(total_log);
    }
    return result;
}

inline double kron_determinant(std::span<const DenseMatrix> factors) {
    return kron_determinant_detail(factors).value;
}

inline double kron_determinant(std::initializer_list<DenseMatrix> factors) {
    return kron_determinant(std::span<const DenseMatrix>(factors.begin(), factors.size()));
}

/// Jacobian of a_i |-> vec(⊗_j a_j) under the lexicographic vec:
/// kron(a_1, ..., a_{i-1}, I_{n_i}, a_{i+1}, ..., a_N), a (prod_k n_k) x n_i
/// matrix. Mode i is 0-based.
inline DenseMatrix cp_jacobian(std::span<const std::vector<double>> vectors, std::size_t i) {
    if (vectors.empty()) {
        throw ArgumentError("cp jacobian needs at least one vector");
    }
    if (i >= vectors.size()) {
        throw ArgumentError("mode " + std::to_string(i + 1) + " out of range for " +
                            std::to_string(vectors.size()) + " vectors");
    }
    DenseMatrix acc(1, 1, {1.0});
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].empty()) throw ArgumentError("cp jacobian vectors must be non-empty");
        if (k == i) {
            acc = kron(acc, DenseMatrix::identity(vectors[k].size()));
        } else {
            acc = kron(acc, DenseMatrix::column(vectors[k]));
        }
    }
    return acc;
}

inline DenseMatrix cp_jacobian(std::initializer_list<std::vector<double>> vectors,
                               std::size_t i) {
    return cp_jacobian(std::span<const std::vector<double>>(vectors.begin(), vectors.size()),
                       i);
}

/// Operator K with vec(AX + XB) = K vec(X) under the lexicographic vec:
/// K = kron(A, I_n) + kron(I_m, B^T) for A (m x m), B (n x n).
inline DenseMatrix sylvester_vec_operator(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != a.cols()) {
        throw ShapeError("sylvester operator: A is not square (" + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ")");
    }
    if (b.rows() != b.cols()) {
        throw ShapeError("sylvester operator: B is not square (" + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()) + ")");
    }
    return kron(a, DenseMatrix::identity(b.rows())) +
           kron(DenseMatrix::identity(a.rows()), transpose(b));
}

}  // namespace lext
