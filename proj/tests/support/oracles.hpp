// SPDX-License-Identifier: MIT
#pragma once

// Test-side oracles, deliberately independent of the library code paths
// they are used to check.

#include "lext/lext.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracles {

/// Enumerates shapes with order in [min_order, max_order], dimensions in
/// [1, max_dim] and element count <= max_product.
inline void enumerate_shapes(std::size_t min_order, std::size_t max_order,
                             std::size_t max_dim, std::size_t max_product,
                             const std::function<void(const lext::Shape&)>& fn) {
    std::vector<std::size_t> dims;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t order,
                                                            std::size_t product) {
        if (dims.size() == order) {
            fn(lext::Shape{std::vector<std::size_t>(dims)});
            return;
        }
        for (std::size_t d = 1; d <= max_dim && product * d <= max_product; ++d) {
            dims.push_back(d);
            rec(order, product * d);
            dims.pop_back();
        }
    };
    for (std::size_t order = min_order; order <= max_order; ++order) {
        dims.clear();
        rec(order, 1);
    }
}

/// Mode-k contraction by explicit summation over multi-indices, nothing
/// shared with the strided implementation.
inline lext::DenseTensor mode_product_bruteforce(const lext::DenseTensor& t,
                                                 const lext::DenseMatrix& u, std::size_t k) {
    std::vector<std::size_t> out_dims(t.shape().dims().begin(), t.shape().dims().end());
    out_dims[k] = u.rows();
    lext::DenseTensor out{lext::Shape{std::move(out_dims)}};
    lext::MultiIndex m(out.order(), 0);
    do {
        double acc = 0.0;
        lext::MultiIndex src = m;
        for (std::size_t j = 0; j < t.shape().dim(k); ++j) {
            src[k] = j;
            acc += u(m[k], j) * t.at(src);
        }
        out.at(m) = acc;
    } while (lext::next_multi_index(out.shape(), m));
    return out;
}

/// Dense multivariate normal log-density from explicit mean vector and
/// covariance matrix: the vec-law route.
inline double dense_gaussian_logpdf(const lext::DenseMatrix& mean_vec,
                                    const lext::DenseMatrix& covariance,
                                    const lext::DenseMatrix& x_vec) {
    const std::size_t n = mean_vec.rows();
    const auto l = lext::cholesky_lower(covariance);
    if (!l) throw lext::DefinitenessError("oracle covariance is not positive definite");
    double log_det = 0.0;
    for (std::size_t k = 0; k < n; ++k) log_det += 2.0 * std::log((*l)(k, k));
    // Forward substitution: y = L^{-1} (x - mean).
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = x_vec(k, 0) - mean_vec(k, 0);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = r[i];
        for (std::size_t j = 0; j < i; ++j) acc -= (*l)(i, j) * r[j];
        r[i] = acc / (*l)(i, i);
        quad += r[i] * r[i];
    }
    return -0.5 * quad - 0.5 * log_det -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

/// Gauss-Hermite nodes and weights for weight exp(-x^2) via the eigenvalues
/// of the Jacobi matrix (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(std::size_t n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k) / 2.0);
        jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
        jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    std::vector<double> nodes(n), weights(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
        const double q0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
        weights[i] = mu0 * q0 * q0;
    }
    return {std::move(nodes), std::move(weights)};
}

}  // namespace oracles
