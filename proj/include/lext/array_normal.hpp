// SPDX-License-Identifier: MIT
#pragma once

// Separable-covariance Gaussian distribution on multiway arrays: the
// vectorized tensor is normal with covariance kron(Sigma_1, ..., Sigma_N).
// Densities are computed without materializing the full covariance by
// whitening with per-mode Cholesky factors; the determinant uses the
// factorized rule log|Gamma| = sum_i (prod_{j != i} n_j) log det Sigma_i.

#include "lext/error.hpp"
#include "lext/kron.hpp"
#include "lext/layout.hpp"
#include "lext/linalg.hpp"
#include "lext/matrix.hpp"
#include "lext/random.hpp"
#include "lext/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lext {

/// Parameters of the matrix normal law MN(mean, row covariance, column
/// covariance) followed by an unfolding of a separable Gaussian array.
struct MatrixNormalParams {
    DenseMatrix mean;
    DenseMatrix row_covariance;
    DenseMatrix column_covariance;
};

/// Array normal law AN(M, ⊗_i Sigma_i) with symmetric positive-definite
/// per-mode covariance factors. Cholesky factors are cached at
/// construction; the value is immutable afterwards and safe to share.
class SeparableGaussian {
public:
    SeparableGaussian(DenseTensor mean, std::vector<DenseMatrix> covariances)
        : mean_(std::move(mean)), covariances_(std::move(covariances)) {
        if (covariances_.size() != mean_.order()) {
            throw ShapeError("array normal: " + std::to_string(covariances_.size()) +
                             " covariance factors for an order-" +
                             std::to_string(mean_.order()) + " mean");
        }
        chol_.reserve(covariances_.size());
        chol_inv_.reserve(covariances_.size());
        log_det_.reserve(covariances_.size());
        for (std::size_t i = 0; i < covariances_.size(); ++i) {
            const DenseMatrix& cov = covariances_[i];
            const std::size_t n = mean_.shape().dim(i);
            if (cov.rows() != n || cov.cols() != n) {
                throw ShapeError("covariance factor " + std::to_string(i + 1) + " is " +
                                 std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()) +
                                 ", mode dimension is " + std::to_string(n));
            }
            check_symmetry(cov, i);
            auto l = cholesky_lower(cov);
            if (!l) {
                throw DefinitenessError("covariance factor " + std::to_string(i + 1) +
                                        " is not positive definite");
            }
            double log_det = 0.0;
            for (std::size_t k = 0; k < n; ++k) log_det += 2.0 * std::log((*l)(k, k));
            chol_.push_back(*l);
            chol_inv_.push_back(invert_lower_triangular(*l));
            log_det_.push_back(log_det);
        }
    }

    const DenseTensor& mean() const { return mean_; }
    std::size_t order() const { return mean_.order(); }
    const DenseMatrix& covariance(std::size_t i) const { return covariances_[i]; }
    std::span<const DenseMatrix> covariances() const { return covariances_; }
    const DenseMatrix& cholesky_factor(std::size_t i) const { return chol_[i]; }
    double covariance_log_det(std::size_t i) const { return log_det_[i]; }

    /// log|Gamma| by the Kronecker determinant rule, no materialization.
    double full_log_det() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < order(); ++i) {
            double others = 1.0;
            for (std::size_t j = 0; j < order(); ++j) {
                if (j != i) others *= static_cast<double>(mean_.shape().dim(j));
            }
            acc += others * log_det_[i];
        }
        return acc;
    }

    std::span<const DenseMatrix> cholesky_inverses() const { return chol_inv_; }

private:
    static void check_symmetry(const DenseMatrix& cov, std::size_t i) {
        double asym = 0.0;
        double scale = 0.0;
        for (std::size_t r = 0; r < cov.rows(); ++r) {
            for (std::size_t c = 0; c < cov.cols(); ++c) {
                asym = std::max(asym, std::fabs(cov(r, c) - cov(c, r)));
                scale = std::max(scale, std::fabs(cov(r, c)));
            }
        }
        if (asym > 1e-12 * std::max(scale, 1e-300)) {
            throw DefinitenessError("covariance factor " + std::to_string(i + 1) +
                                    " is not symmetric (relative asymmetry " +
                                    std::to_string(asym / std::max(scale, 1e-300)) + ")");
        }
    }

    DenseTensor mean_;
    std::vector<DenseMatrix> covariances_;
    std::vector<DenseMatrix> chol_;      // Sigma_i = L_i L_i^T
    std::vector<DenseMatrix> chol_inv_;  // L_i^{-1}, used for whitening
    std::vector<double> log_det_;        // log det Sigma_i
};

/// Exact log-density at X: -||Z||^2/2 - log|Gamma|/2 - (prod n_i / 2) log 2pi
/// where Z = (⊗_i L_i^{-1})(X - M) is the whitened residual.
inline double log_density(const SeparableGaussian& d, const DenseTensor& x) {
    if (x.shape() != d.mean().shape()) {
        throw ShapeError("log_density: tensor shape " + to_string(x.shape()) +
                         " does not match mean shape " + to_string(d.mean().shape()));
    }
    const DenseTensor z = multilinear_apply(d.cholesky_inverses(), x - d.mean());
    double quad = 0.0;
    for (double v : z.data()) quad += v * v;
    const double n = static_cast<double>(x.numel());
    return -0.5 * quad - 0.5 * d.full_log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

/// Draws count samples M + (⊗_i L_i) Z with Z filled from the seeded
/// deterministic normal stream (mt19937_64 + inverse CDF) in lexicographic
/// order. The same seed always reproduces the same samples bit for bit.
inline std::vector<DenseTensor> sample(const SeparableGaussian& d, std::uint64_t seed,
                                       std::size_t count) {
    std::mt19937_64 eng(seed);
    std::vector<DenseTensor> out;
    out.reserve(count);
    std::vector<DenseMatrix> chol(d.order());
    for (std::size_t i = 0; i < d.order(); ++i) chol[i] = d.cholesky_factor(i);
    for (std::size_t s = 0; s < count; ++s) {
        DenseTensor z(d.mean().shape());
        for (auto& v : z.data()) v = standard_normal(eng);
        out.push_back(d.mean() + multilinear_apply(chol, z));
    }
    return out;
}

/// Matrix law of the mode-i unfolding: MN(M_(i), Sigma_i, ⊠_{j != i} Sigma_j)
/// with the ascending-j Kronecker chain.
inline MatrixNormalParams unfolding_law(const SeparableGaussian& d, std::size_t mode) {
    if (mode >= d.order()) {
        throw ArgumentError("mode " + std::to_string(mode + 1) +
                            " out of range for order-" + std::to_string(d.order()) +
                            " distribution");
    }
    std::vector<DenseMatrix> others;
    others.reserve(d.order() - 1);
    for (std::size_t j = 0; j < d.order(); ++j) {
        if (j != mode) others.push_back(d.covariance(j));
    }
    return MatrixNormalParams{matricize(d.mean(), mode), d.covariance(mode),
                              kron(std::span<const DenseMatrix>(others))};
}

/// Law of the vectorized tensor: (vec(M), ⊠_i Sigma_i), materialized
/// densely. Guarded by a cap because the covariance is (prod n_i)^2.
inline std::pair<DenseMatrix, DenseMatrix> vec_law(const SeparableGaussian& d,
                                                   std::size_t materialization_cap = 4096) {
    if (d.mean().numel() > materialization_cap) {
        throw CapacityError("vec_law: " + std::to_string(d.mean().numel()) +
                            " elements exceed the materialization cap of " +
                            std::to_string(materialization_cap));
    }
    return {vec(d.mean()), kron(d.covariances())};
}

/// Log-density of the matrix normal law at X:
/// -tr[V^{-1} (X-M)^T U^{-1} (X-M)]/2 - (np/2) log 2pi - (p/2) log|U| - (n/2) log|V|
/// for an n x p observation with row covariance U and column covariance V.
inline double log_density(const MatrixNormalParams& params, const DenseMatrix& x) {
    const std::size_t n = params.mean.rows();
    const std::size_t p = params.mean.cols();
    if (x.rows() != n || x.cols() != p) {
        throw ShapeError("matrix normal log_density: observation is " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                         ", mean is " + std::to_string(n) + "x" + std::to_string(p));
    }
    auto lu = cholesky_lower(params.row_covariance);
    auto lv = cholesky_lower(params.column_covariance);
    if (!lu || !lv) {
        throw DefinitenessError("matrix normal covariance is not positive definite");
    }
    double log_det_u = 0.0, log_det_v = 0.0;
    for (std::size_t k = 0; k < n; ++k) log_det_u += 2.0 * std::log((*lu)(k, k));
    for (std::size_t k = 0; k < p; ++k) log_det_v += 2.0 * std::log((*lv)(k, k));

    // Whiten both sides: Z = L_u^{-1} (X - M) L_v^{-T}, quad = ||Z||_F^2.
    const DenseMatrix residual = x - params.mean;
    const DenseMatrix z =
        invert_lower_triangular(*lu) * residual * transpose(invert_lower_triangular(*lv));
    double quad = 0.0;
    for (double v : z.data()) quad += v * v;

    const double np = static_cast<double>(n) * static_cast<double>(p);
    return -0.5 * quad - 0.5 * np * std::log(2.0 * std::numbers::pi) -
           0.5 * static_cast<double>(p) * log_det_u - 0.5 * static_cast<double>(n) * log_det_v;
}

/// Multilinear transform of the distribution: mean becomes (⊗_i W_i) M and
/// each covariance factor becomes W_i Sigma_i W_i^T (symmetrized). The W_i
/// must be square and invertible so the result stays a valid array normal
/// law; a rank-deficient W_i fails the Cholesky check.
inline SeparableGaussian transform(const SeparableGaussian& d,
                                   std::span<const DenseMatrix> w) {
    if (w.size() != d.order()) {
        throw ShapeError("transform: " + std::to_string(w.size()) +
                         " matrices for an order-" + std::to_string(d.order()) +
                         " distribution");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        const std::size_t n = d.mean().shape().dim(i);
        if (w[i].rows() != n || w[i].cols() != n) {
            throw DefinitenessError("transform matrix " + std::to_string(i + 1) + " must be " +
                                    std::to_string(n) + "x" + std::to_string(n) +
                                    " and invertible, got " + std::to_string(w[i].rows()) +
                                    "x" + std::to_string(w[i].cols()));
        }
    }
    std::vector<DenseMatrix> new_cov;
    new_cov.reserve(d.order());
    for (std::size_t i = 0; i < d.order(); ++i) {
        DenseMatrix c = w[i] * d.covariance(i) * transpose(w[i]);
        // Symmetrize to wash out roundoff before the SPD validation.
        for (std::size_t r = 0; r < c.rows(); ++r) {
            for (std::size_t s = r + 1; s < c.cols(); ++s) {
                const double avg = 0.5 * (c(r, s) + c(s, r));
                c(r, s) = avg;
                c(s, r) = avg;
            }
        }
        new_cov.push_back(std::move(c));
    }
    try {
        return SeparableGaussian(multilinear_apply(w, d.mean()), std::move(new_cov));
    } catch (const DefinitenessError&) {
        throw DefinitenessError(
            "transform produced a non positive definite covariance (is every W_i "
            "invertible?)");
    }
}

inline SeparableGaussian transform(const SeparableGaussian& d,
                                   std::initializer_list<DenseMatrix> w) {
    return transform(d, std::span<const DenseMatrix>(w.begin(), w.size()));
}

}  // namespace lext
