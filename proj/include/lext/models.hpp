// SPDX-License-Identifier: MIT
#pragma once

// CP and Tucker model containers with reconstruction, unfolding and
// vectorized forms. Models are immutable after construction; all
// operations are pure.

#include "lext/error.hpp"
#include "lext/kron.hpp"
#include "lext/layout.hpp"
#include "lext/matrix.hpp"
#include "lext/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lext {

/// Sum of R rank-1 terms, held as factor matrices A_i (n_i x R). R = 0 is
/// legal and denotes the zero tensor.
class CPModel {
public:
    explicit CPModel(std::vector<DenseMatrix> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) {
            throw ArgumentError("CP model needs at least one factor matrix");
        }
        const std::size_t r = factors_[0].cols();
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].rows() == 0) {
                throw ShapeError("CP factor " + std::to_string(i + 1) + " has no rows");
            }
            if (factors_[i].cols() != r) {
                throw ShapeError("CP factor " + std::to_string(i + 1) + " has " +
                                 std::to_string(factors_[i].cols()) +
                                 " columns, expected rank " + std::to_string(r));
            }
        }
    }

    std::size_t order() const { return factors_.size(); }
    std::size_t rank() const { return factors_[0].cols(); }
    const DenseMatrix& factor(std::size_t i) const { return factors_[i]; }
    std::span<const DenseMatrix> factors() const { return factors_; }

    Shape shape() const {
        std::vector<std::size_t> dims(order());
        for (std::size_t i = 0; i < order(); ++i) dims[i] = factors_[i].rows();
        return Shape{std::move(dims)};
    }

private:
    std::vector<DenseMatrix> factors_;
};

/// Core tensor G plus factor matrices U_i (n_i x R_i).
class TuckerModel {
public:
    TuckerModel(DenseTensor core, std::vector<DenseMatrix> factors)
        : core_(std::move(core)), factors_(std::move(factors)) {
        if (factors_.size() != core_.order()) {
            throw ShapeError("Tucker model has " + std::to_string(factors_.size()) +
                             " factors for an order-" + std::to_string(core_.order()) +
                             " core");
        }
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].rows() == 0) {
                throw ShapeError("Tucker factor " + std::to_string(i + 1) + " has no rows");
            }
            if (factors_[i].cols() != core_.shape().dim(i)) {
                throw ShapeError("Tucker factor " + std::to_string(i + 1) + " has " +
                                 std::to_string(factors_[i].cols()) +
                                 " columns, core dimension is " +
                                 std::to_string(core_.shape().dim(i)));
            }
        }
    }

    std::size_t order() const { return core_.order(); }
    const DenseTensor& core() const { return core_; }
    const DenseMatrix& factor(std::size_t i) const { return factors_[i]; }
    std::span<const DenseMatrix> factors() const { return factors_; }

    Shape shape() const {
        std::vector<std::size_t> dims(order());
        for (std::size_t i = 0; i < order(); ++i) dims[i] = factors_[i].rows();
        return Shape{std::move(dims)};
    }

private:
    DenseTensor core_;
    std::vector<DenseMatrix> factors_;
};

/// Order-N diagonal tensor of shape (R, ..., R) with ones where all indices
/// coincide. R = 0 yields no tensor (the shapes would be empty); callers
/// handle that case themselves.
inline DenseTensor diagonal_tensor(std::size_t r, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("diagonal tensor order must be >= 1");
    }
    if (r < 1) {
        throw ArgumentError("diagonal tensor needs R >= 1 (shapes cannot have zero dims)");
    }
    DenseTensor out{Shape{std::vector<std::size_t>(n, r)}};
    std::size_t stride_sum = 0;  // flat stride of the all-equal diagonal
    {
        std::size_t acc = 1;
        for (std::size_t k = 0; k < n; ++k) {
            stride_sum += acc;
            acc *= r;
        }
    }
    for (std::size_t d = 0; d < r; ++d) out[d * stride_sum] = 1.0;
    return out;
}

/// Y = sum_r outer(a_r^(1), ..., a_r^(N)).
inline DenseTensor cp_reconstruct(const CPModel& m) {
    DenseTensor out(m.shape());
    std::vector<std::vector<double>> columns(m.order());
    for (std::size_t r = 0; r < m.rank(); ++r) {
        for (std::size_t i = 0; i < m.order(); ++i) {
            columns[i] = m.factor(i).column_vector(r);
        }
        out = out + outer(std::span<const std::vector<double>>(columns));
    }
    return out;
}

/// Y_(i) = A_i (kr_{j != i} A_j)^T with the ascending-j Khatri-Rao chain.
/// For order 1 the chain is empty and its unit is the 1 x R matrix of ones.
inline DenseMatrix cp_unfolding(const CPModel& m, std::size_t mode) {
    if (mode >= m.order()) {
        throw ArgumentError("mode " + std::to_string(mode + 1) + " out of range for order-" +
                            std::to_string(m.order()) + " CP model");
    }
    std::vector<DenseMatrix> others;
    others.reserve(m.order() - 1);
    for (std::size_t j = 0; j < m.order(); ++j) {
        if (j != mode) others.push_back(m.factor(j));
    }
    const DenseMatrix kr = others.empty() ? DenseMatrix::ones(1, m.rank())
                                          : khatri_rao(std::span<const DenseMatrix>(others));
    return m.factor(mode) * transpose(kr);
}

/// vec(Y) = (kr_i A_i) * ones(R).
inline DenseMatrix cp_vec(const CPModel& m) {
    const DenseMatrix kr = khatri_rao(m.factors());
    return kr * DenseMatrix::ones(m.rank(), 1);
}

/// Y = (⊗_i U_i) G.
inline DenseTensor tucker_reconstruct(const TuckerModel& m) {
    return multilinear_apply(m.factors(), m.core());
}

/// Y_(i) = U_i G_(i) (⊠_{j != i} U_j^T) with the ascending-j Kronecker
/// chain (empty chain = 1x1 identity).
inline DenseMatrix tucker_unfolding(const TuckerModel& m, std::size_t mode) {
    if (mode >= m.order()) {
        throw ArgumentError("mode " + std::to_string(mode + 1) + " out of range for order-" +
                            std::to_string(m.order()) + " Tucker model");
    }
    std::vector<DenseMatrix> others;
    others.reserve(m.order() - 1);
    for (std::size_t j = 0; j < m.order(); ++j) {
        if (j != mode) others.push_back(transpose(m.factor(j)));
    }
    return m.factor(mode) * matricize(m.core(), mode) *
           kron(std::span<const DenseMatrix>(others));
}

/// Multilinear preprocessing of a CP model: (⊗_i W_i) Y has factors W_i A_i.
inline CPModel transform_cp(std::span<const DenseMatrix> w, const CPModel& m) {
    if (w.size() != m.order()) {
        throw ShapeError("transform: " + std::to_string(w.size()) +
                         " matrices for an order-" + std::to_string(m.order()) + " CP model");
    }
    std::vector<DenseMatrix> transformed;
    transformed.reserve(m.order());
    for (std::size_t i = 0; i < m.order(); ++i) {
        if (w[i].cols() != m.factor(i).rows()) {
            throw ShapeError("transform: matrix " + std::to_string(i + 1) + " has " +
                             std::to_string(w[i].cols()) + " columns, mode dimension is " +
                             std::to_string(m.factor(i).rows()));
        }
        transformed.push_back(w[i] * m.factor(i));
    }
    return CPModel(std::move(transformed));
}

inline CPModel transform_cp(std::initializer_list<DenseMatrix> w, const CPModel& m) {
    return transform_cp(std::span<const DenseMatrix>(w.begin(), w.size()), m);
}

/// Rescales every factor column to unit Euclidean norm and returns the
/// per-component weights prod_i ||a_r^(i)||. Convenience only; zero columns
/// keep weight 0 and are left untouched.
inline std::pair<CPModel, std::vector<double>> cp_normalize(const CPModel& m) {
    std::vector<DenseMatrix> factors(m.factors().begin(), m.factors().end());
    std::vector<double> weights(m.rank(), 1.0);
    for (std::size_t r = 0; r < m.rank(); ++r) {
        for (std::size_t i = 0; i < m.order(); ++i) {
            double norm = 0.0;
            for (std::size_t k = 0; k < factors[i].rows(); ++k) {
                norm += factors[i](k, r) * factors[i](k, r);
            }
            norm = std::sqrt(norm);
            weights[r] *= norm;
            if (norm > 0.0) {
                for (std::size_t k = 0; k < factors[i].rows(); ++k) {
                    factors[i](k, r) /= norm;
                }
            }
        }
    }
    return {CPModel(std::move(factors)), std::move(weights)};
}

}  // namespace lext
