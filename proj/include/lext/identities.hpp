// SPDX-License-Identifier: MIT
#pragma once

// Registry of the seventeen product/vectorization identities plus the
// operator-basis independence check, executed as randomized property
// trials. Every identity is evaluated through two independent code paths
// (tensor operations on one side, matrix/Kronecker algebra on the other)
// and judged by the relative Frobenius error of the two results.
//
// Mutation modes deliberately re-introduce the classic convention bugs
// (factor-order swaps, a transposed Jacobian, a duplicated basis element)
// to demonstrate that the suite detects them. A mutation only affects the
// identities it is defined for; the rest run clean.

#include "lext/error.hpp"
#include "lext/kron.hpp"
#include "lext/layout.hpp"
#include "lext/linalg.hpp"
#include "lext/matrix.hpp"
#include "lext/models.hpp"
#include "lext/random.hpp"
#include "lext/shape.hpp"
#include "lext/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lext {

enum class Mutation {
    none,
    swap_factor_order,        ///< reverse Kronecker/Khatri-Rao chains (T1, T8, T11, T15)
    transpose_jacobian,       ///< transpose the analytic Jacobian (T16)
    duplicate_basis_element,  ///< repeat one elementary operator (APP-A)
};

struct DimensionBounds {
    std::size_t max_order = 4;
    std::size_t max_dim = 5;
    std::size_t max_rank = 4;
};

struct TrialConfig {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;
    DimensionBounds bounds;
    Mutation mutation = Mutation::none;
};

struct Counterexample {
    std::uint64_t seed = 0;  ///< derived per-trial seed that reproduces the failure
    std::string shapes;
};

struct CheckReport {
    std::string id;
    std::size_t trials = 0;
    double max_rel_err = 0.0;
    bool pass = false;
    std::optional<Counterexample> counterexample;
    std::string note;  ///< e.g. "corrected" for the fixed Sylvester form
};

// ---------------------------------------------------------------------------
// Random instance generation: entries i.i.d. uniform on [-1, 1], dimensions
// uniform on [1, bound]. SPD inputs are A^T A + eps I, orthogonal inputs the
// Q factor of a random square matrix.

namespace gen {

inline std::size_t dim(std::mt19937_64& eng, std::size_t bound) {
    return 1 + uniform_index(eng, bound);
}

inline std::vector<double> vector(std::mt19937_64& eng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform_pm1(eng);
    return v;
}

inline DenseMatrix matrix(std::mt19937_64& eng, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (auto& x : m.data()) x = uniform_pm1(eng);
    return m;
}

inline DenseTensor tensor(std::mt19937_64& eng, const Shape& s) {
    DenseTensor t(s);
    for (auto& x : t.data()) x = uniform_pm1(eng);
    return t;
}

inline Shape shape(std::mt19937_64& eng, const DimensionBounds& b) {
    const std::size_t order = dim(eng, b.max_order);
    std::vector<std::size_t> dims(order);
    for (auto& d : dims) d = dim(eng, b.max_dim);
    return Shape{std::move(dims)};
}

inline DenseMatrix spd(std::mt19937_64& eng, std::size_t n) {
    const DenseMatrix a = matrix(eng, n, n);
    DenseMatrix s = transpose(a) * a;
    for (std::size_t i = 0; i < n; ++i) s(i, i) += 0.1;
    return s;
}

inline DenseMatrix orthogonal(std::mt19937_64& eng, std::size_t n) {
    return orthonormalize(matrix(eng, n, n));
}

}  // namespace gen

// ---------------------------------------------------------------------------

struct IdentityCase {
    std::string id;
    std::string description;
    std::string note;
    std::function<double(std::mt19937_64&, const TrialConfig&, std::string&)> trial;
};

namespace detail {

inline DenseMatrix column(const std::vector<double>& v) { return DenseMatrix::column(v); }

inline DenseMatrix vec_of_matrix(const DenseMatrix& m) { return vec(matrix_as_tensor(m)); }

inline std::vector<DenseMatrix> column_matrices(std::span<const std::vector<double>> vs,
                                                bool reversed) {
    std::vector<DenseMatrix> cols;
    cols.reserve(vs.size());
    for (const auto& v : vs) cols.push_back(column(v));
    if (reversed) std::reverse(cols.begin(), cols.end());
    return cols;
}

inline std::string shape_note(std::string_view label, const Shape& s) {
    return std::string(label) + "=" + to_string(s);
}

// T1: vec of an outer product of two vectors is their Kronecker product.
inline double trial_t1(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const auto a = gen::vector(eng, gen::dim(eng, cfg.bounds.max_dim));
    const auto b = gen::vector(eng, gen::dim(eng, cfg.bounds.max_dim));
    shapes = "a=" + std::to_string(a.size()) + " b=" + std::to_string(b.size());
    const DenseMatrix lhs = vec(outer({a, b}));
    const bool swap = cfg.mutation == Mutation::swap_factor_order;
    const DenseMatrix rhs =
        swap ? kron(column(b), column(a)) : kron(column(a), column(b));
    return relative_error(lhs, rhs);
}

// T2: vec(A X B^T) = kron(A, B) vec(X).
inline double trial_t2(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t p = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t m = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t n = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t q = gen::dim(eng, cfg.bounds.max_dim);
    const DenseMatrix a = gen::matrix(eng, p, m);
    const DenseMatrix x = gen::matrix(eng, m, n);
    const DenseMatrix b = gen::matrix(eng, q, n);
    shapes = "A=" + std::to_string(p) + "x" + std::to_string(m) + " X=" + std::to_string(m) +
             "x" + std::to_string(n) + " B=" + std::to_string(q) + "x" + std::to_string(n);
    const DenseMatrix lhs = vec_of_matrix(a * x * transpose(b));
    const DenseMatrix rhs = kron(a, b) * vec_of_matrix(x);
    return relative_error(lhs, rhs);
}

// T3: mixed product kron(A,B) kron(C,D) = kron(AC, BD).
inline double trial_t3(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t bound = std::min<std::size_t>(cfg.bounds.max_dim, 4);
    const std::size_t p1 = gen::dim(eng, bound), q1 = gen::dim(eng, bound);
    const std::size_t r1 = gen::dim(eng, bound);
    const std::size_t p2 = gen::dim(eng, bound), q2 = gen::dim(eng, bound);
    const std::size_t r2 = gen::dim(eng, bound);
    const DenseMatrix a = gen::matrix(eng, p1, q1), c = gen::matrix(eng, q1, r1);
    const DenseMatrix b = gen::matrix(eng, p2, q2), d = gen::matrix(eng, q2, r2);
    shapes = "A=" + std::to_string(p1) + "x" + std::to_string(q1) + " B=" + std::to_string(p2) +
             "x" + std::to_string(q2);
    return relative_error(kron(a, b) * kron(c, d), kron(a * c, b * d));
}

// T4: rank-1 action (⊗ U_i)(⊗ a_i) = ⊗ (U_i a_i).
inline double trial_t4(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, cfg.bounds.max_order);
    std::vector<DenseMatrix> factors(order);
    std::vector<std::vector<double>> in(order), mapped(order);
    for (std::size_t i = 0; i < order; ++i) {
        const std::size_t n = gen::dim(eng, cfg.bounds.max_dim);
        const std::size_t q = gen::dim(eng, cfg.bounds.max_dim);
        factors[i] = gen::matrix(eng, q, n);
        in[i] = gen::vector(eng, n);
        mapped[i] = (factors[i] * column(in[i])).column_vector(0);
    }
    const DenseTensor lhs = multilinear_apply(factors, outer(in));
    const DenseTensor rhs = outer(std::span<const std::vector<double>>(mapped));
    shapes = shape_note("out", rhs.shape());
    return relative_error(lhs, rhs);
}

// T5: kron(A,B) (C kr D) = (AC) kr (BD).
inline double trial_t5(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t p1 = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t q1 = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t p2 = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t q2 = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t r = gen::dim(eng, cfg.bounds.max_rank);
    const DenseMatrix a = gen::matrix(eng, p1, q1), b = gen::matrix(eng, p2, q2);
    const DenseMatrix c = gen::matrix(eng, q1, r), d = gen::matrix(eng, q2, r);
    shapes = "A=" + std::to_string(p1) + "x" + std::to_string(q1) + " R=" + std::to_string(r);
    return relative_error(kron(a, b) * khatri_rao(c, d), khatri_rao(a * c, b * d));
}

// T6: kron(A,B)^T = kron(A^T, B^T), expected exact.
inline double trial_t6(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const DenseMatrix a =
        gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), gen::dim(eng, cfg.bounds.max_dim));
    const DenseMatrix b =
        gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), gen::dim(eng, cfg.bounds.max_dim));
    shapes = "A=" + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
             " B=" + std::to_string(b.rows()) + "x" + std::to_string(b.cols());
    return relative_error(transpose(kron(a, b)), kron(transpose(a), transpose(b)));
}

// T7: Sylvester vectorization, corrected Kronecker-sum form:
// (kron(A, I) + kron(I, B^T)) vec(X) = vec(AX + XB).
inline double trial_t7(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t m = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t n = gen::dim(eng, cfg.bounds.max_dim);
    const DenseMatrix a = gen::matrix(eng, m, m);
    const DenseMatrix b = gen::matrix(eng, n, n);
    const DenseMatrix x = gen::matrix(eng, m, n);
    shapes = "A=" + std::to_string(m) + "x" + std::to_string(m) + " B=" + std::to_string(n) +
             "x" + std::to_string(n);
    const DenseMatrix lhs = sylvester_vec_operator(a, b) * vec_of_matrix(x);
    const DenseMatrix rhs = vec_of_matrix(a * x + x * b);
    return relative_error(lhs, rhs);
}

// T8: vec of an N-fold outer product is the Kronecker chain, same order.
inline double trial_t8(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, cfg.bounds.max_order);
    std::vector<std::vector<double>> vs(order);
    for (auto& v : vs) v = gen::vector(eng, gen::dim(eng, cfg.bounds.max_dim));
    const DenseTensor y = outer(std::span<const std::vector<double>>(vs));
    shapes = shape_note("shape", y.shape());
    const auto cols =
        column_matrices(vs, cfg.mutation == Mutation::swap_factor_order);
    return relative_error(vec(y), kron(std::span<const DenseMatrix>(cols)));
}

// T9: Y = X •_i U  <=>  Y_(i) = U X_(i), checked at every mode.
inline double trial_t9(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const Shape s = gen::shape(eng, cfg.bounds);
    const DenseTensor x = gen::tensor(eng, s);
    shapes = shape_note("shape", s);
    double err = 0.0;
    for (std::size_t i = 0; i < s.order(); ++i) {
        const DenseMatrix u = gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), s.dim(i));
        const DenseMatrix lhs = matricize(mode_product(x, u, i), i);
        const DenseMatrix rhs = u * matricize(x, i);
        err = std::max(err, relative_error(lhs, rhs));
    }
    return err;
}

// T10: vec((⊗ U_i) Y) = (⊠ U_i) vec(Y).
inline double trial_t10(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const Shape s = gen::shape(eng, cfg.bounds);
    const DenseTensor y = gen::tensor(eng, s);
    std::vector<DenseMatrix> factors(s.order());
    for (std::size_t i = 0; i < s.order(); ++i) {
        factors[i] = gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), s.dim(i));
    }
    shapes = shape_note("shape", s);
    const DenseMatrix lhs = vec(multilinear_apply(factors, y));
    const DenseMatrix rhs = kron(std::span<const DenseMatrix>(factors)) * vec(y);
    return relative_error(lhs, rhs);
}

// Shared by T11/T12: random multilinear action and its matricizations.
struct MultilinearInstance {
    DenseTensor y;
    std::vector<DenseMatrix> factors;
    DenseTensor applied;
};

inline MultilinearInstance make_multilinear(std::mt19937_64& eng, const TrialConfig& cfg) {
    MultilinearInstance inst{gen::tensor(eng, gen::shape(eng, cfg.bounds)), {}, DenseTensor{Shape{1}}};
    inst.factors.resize(inst.y.order());
    for (std::size_t i = 0; i < inst.y.order(); ++i) {
        inst.factors[i] =
            gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), inst.y.shape().dim(i));
    }
    inst.applied = multilinear_apply(inst.factors, inst.y);
    return inst;
}

// T11: [(⊗ U_j) Y]_(i) = U_i Y_(i) (⊠_{j != i} U_j^T).
inline double trial_t11(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const auto inst = make_multilinear(eng, cfg);
    shapes = shape_note("shape", inst.y.shape());
    double err = 0.0;
    for (std::size_t i = 0; i < inst.y.order(); ++i) {
        std::vector<DenseMatrix> others;
        for (std::size_t j = 0; j < inst.y.order(); ++j) {
            if (j != i) others.push_back(transpose(inst.factors[j]));
        }
        if (cfg.mutation == Mutation::swap_factor_order) {
            std::reverse(others.begin(), others.end());
        }
        const DenseMatrix lhs = matricize(inst.applied, i);
        const DenseMatrix rhs = inst.factors[i] * matricize(inst.y, i) *
                                kron(std::span<const DenseMatrix>(others));
        err = std::max(err, relative_error(lhs, rhs));
    }
    return err;
}

// T12: same identity with the right side evaluated as the order-2
// multilinear action on Y_(i): mode-1 product with U_i, mode-2 product with
// kron(U_j^T)^T.
inline double trial_t12(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const auto inst = make_multilinear(eng, cfg);
    shapes = shape_note("shape", inst.y.shape());
    double err = 0.0;
    for (std::size_t i = 0; i < inst.y.order(); ++i) {
        std::vector<DenseMatrix> others;
        for (std::size_t j = 0; j < inst.y.order(); ++j) {
            if (j != i) others.push_back(transpose(inst.factors[j]));
        }
        const DenseMatrix op = transpose(kron(std::span<const DenseMatrix>(others)));
        const DenseTensor unfolded = matrix_as_tensor(matricize(inst.y, i));
        const DenseTensor acted =
            mode_product(mode_product(unfolded, inst.factors[i], 0), op, 1);
        err = std::max(err,
                       relative_error(matricize(inst.applied, i), tensor_as_matrix(acted)));
    }
    return err;
}

// Random CP factors: order-many matrices n_i x R.
inline std::vector<DenseMatrix> random_cp_factors(std::mt19937_64& eng,
                                                  const TrialConfig& cfg, std::size_t order,
                                                  std::size_t rank) {
    std::vector<DenseMatrix> factors(order);
    for (auto& f : factors) f = gen::matrix(eng, gen::dim(eng, cfg.bounds.max_dim), rank);
    return factors;
}

inline DenseTensor cp_sum_of_outers(std::span<const DenseMatrix> factors) {
    std::vector<std::size_t> dims(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) dims[i] = factors[i].rows();
    DenseTensor acc{Shape{std::move(dims)}};
    std::vector<std::vector<double>> cols(factors.size());
    for (std::size_t r = 0; r < factors[0].cols(); ++r) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            cols[i] = factors[i].column_vector(r);
        }
        acc = acc + outer(std::span<const std::vector<double>>(cols));
    }
    return acc;
}

// T13: the unfolding of a sum of rank-1 terms is the sum of
// a_r^(i) (⊠_{j != i} a_r^(j))^T, one Kronecker chain per component.
inline double trial_t13(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, cfg.bounds.max_order);
    const std::size_t rank = uniform_index(eng, cfg.bounds.max_rank + 1);  // 0 allowed
    const auto factors = random_cp_factors(eng, cfg, order, rank);
    const DenseTensor y = cp_sum_of_outers(factors);
    shapes = shape_note("shape", y.shape()) + " R=" + std::to_string(rank);
    double err = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        const DenseMatrix lhs = matricize(y, i);
        DenseMatrix rhs(lhs.rows(), lhs.cols());
        for (std::size_t r = 0; r < rank; ++r) {
            std::vector<DenseMatrix> chain;
            for (std::size_t j = 0; j < order; ++j) {
                if (j != i) chain.push_back(column(factors[j].column_vector(r)));
            }
            rhs = rhs + column(factors[i].column_vector(r)) *
                            transpose(kron(std::span<const DenseMatrix>(chain)));
        }
        err = std::max(err, relative_error(lhs, rhs));
    }
    return err;
}

// T14: sum_r kron(a_r, b_r) = (A kr B) * ones.
inline double trial_t14(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t n = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t m = gen::dim(eng, cfg.bounds.max_dim);
    const std::size_t rank = gen::dim(eng, cfg.bounds.max_rank);
    const DenseMatrix a = gen::matrix(eng, n, rank);
    const DenseMatrix b = gen::matrix(eng, m, rank);
    shapes = "A=" + std::to_string(n) + "x" + std::to_string(rank) + " B=" + std::to_string(m) +
             "x" + std::to_string(rank);
    DenseMatrix lhs(n * m, 1);
    for (std::size_t r = 0; r < rank; ++r) {
        lhs = lhs + kron(column(a.column_vector(r)), column(b.column_vector(r)));
    }
    const DenseMatrix rhs = khatri_rao(a, b) * DenseMatrix::ones(rank, 1);
    return relative_error(lhs, rhs);
}

// T15: CP unfolding in factorized form, A_i (kr_{j != i} A_j)^T.
inline double trial_t15(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, cfg.bounds.max_order);
    const std::size_t rank = uniform_index(eng, cfg.bounds.max_rank + 1);  // 0 allowed
    const auto factors = random_cp_factors(eng, cfg, order, rank);
    const CPModel model(factors);
    const DenseTensor y = cp_sum_of_outers(factors);
    shapes = shape_note("shape", y.shape()) + " R=" + std::to_string(rank);
    double err = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        const DenseMatrix lhs = matricize(y, i);
        DenseMatrix rhs;
        if (cfg.mutation == Mutation::swap_factor_order) {
            std::vector<DenseMatrix> others;
            for (std::size_t j = order; j-- > 0;) {
                if (j != i) others.push_back(factors[j]);  // descending: the classic bug
            }
            const DenseMatrix kr = others.empty()
                                       ? DenseMatrix::ones(1, rank)
                                       : khatri_rao(std::span<const DenseMatrix>(others));
            rhs = factors[i] * transpose(kr);
        } else {
            rhs = cp_unfolding(model, i);
        }
        err = std::max(err, relative_error(lhs, rhs));
    }
    return err;
}

// T16: analytic Jacobian of a_i -> vec(⊗_j a_j) against central finite
// differences. The map is linear in a_i, so the step only controls rounding;
// 0.5 keeps the quotient at machine precision.
inline double trial_t16(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, cfg.bounds.max_order);
    std::vector<std::vector<double>> vs(order);
    for (auto& v : vs) v = gen::vector(eng, gen::dim(eng, cfg.bounds.max_dim));
    std::size_t total = 1;
    for (const auto& v : vs) total *= v.size();
    shapes = "order=" + std::to_string(order) + " total=" + std::to_string(total);

    const double h = 0.5;
    double err = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        DenseMatrix jac = cp_jacobian(vs, i);
        if (cfg.mutation == Mutation::transpose_jacobian) jac = transpose(jac);
        DenseMatrix fd(total, vs[i].size());
        for (std::size_t k = 0; k < vs[i].size(); ++k) {
            auto plus = vs;
            auto minus = vs;
            plus[i][k] += h;
            minus[i][k] -= h;
            const DenseMatrix vp = vec(outer(std::span<const std::vector<double>>(plus)));
            const DenseMatrix vm = vec(outer(std::span<const std::vector<double>>(minus)));
            for (std::size_t row = 0; row < total; ++row) {
                fd(row, k) = (vp(row, 0) - vm(row, 0)) / (2.0 * h);
            }
        }
        err = std::max(err, relative_error(fd, jac));
    }
    return err;
}

// T17: Kronecker determinant rule against the dense determinant. Product
// dimension is kept <= 64 so the dense oracle stays cheap.
inline double trial_t17(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t order = gen::dim(eng, std::min<std::size_t>(cfg.bounds.max_order, 3));
    std::vector<DenseMatrix> factors(order);
    std::string dims;
    for (auto& f : factors) {
        const std::size_t n = gen::dim(eng, 4);
        f = gen::matrix(eng, n, n);
        dims += (dims.empty() ? "" : "x") + std::to_string(n);
    }
    shapes = "factors=" + dims;
    const double lhs = kron_determinant(factors);
    const double rhs = lu_determinant(kron(std::span<const DenseMatrix>(factors))).value;
    return relative_error(lhs, rhs);
}

// APP-A: the elementary operators kron(u_i, v_j) form a free family; the
// stacked flattenings must have full numerical rank.
inline double basis_independence_error(std::size_t n, std::size_t np, std::size_t m,
                                       std::size_t mp, Mutation mutation) {
    const std::size_t count = n * np * m * mp;
    DenseMatrix stack(count, count);
    std::size_t row = 0;
    for (std::size_t i = 0; i < np * n; ++i) {
        DenseMatrix u(np, n);
        u.data()[i] = 1.0;
        for (std::size_t j = 0; j < mp * m; ++j) {
            DenseMatrix v(mp, m);
            v.data()[j] = 1.0;
            const DenseMatrix k = kron(u, v);
            for (std::size_t c = 0; c < k.size(); ++c) stack(row, c) = k.data()[c];
            ++row;
        }
    }
    if (mutation == Mutation::duplicate_basis_element && count >= 2) {
        for (std::size_t c = 0; c < count; ++c) stack(count - 1, c) = stack(0, c);
    }
    const std::size_t rank = numerical_rank(stack, 1e-8);
    return static_cast<double>(count - rank) / static_cast<double>(count);
}

inline double trial_app_a(std::mt19937_64& eng, const TrialConfig& cfg, std::string& shapes) {
    const std::size_t n = gen::dim(eng, 3);
    const std::size_t np = gen::dim(eng, 3);
    const std::size_t m = gen::dim(eng, 3);
    const std::size_t mp = gen::dim(eng, 3);
    shapes = "n=" + std::to_string(n) + " n'=" + std::to_string(np) + " m=" +
             std::to_string(m) + " m'=" + std::to_string(mp);
    return basis_independence_error(n, np, m, mp, cfg.mutation);
}

}  // namespace detail

inline const std::vector<IdentityCase>& identity_registry() {
    static const std::vector<IdentityCase> registry = {
        {"T1", "vec of a two-vector outer product equals their Kronecker product", "",
         detail::trial_t1},
        {"T2", "vec(A X B^T) = kron(A,B) vec(X)", "", detail::trial_t2},
        {"T3", "mixed product: kron(A,B) kron(C,D) = kron(AC,BD)", "", detail::trial_t3},
        {"T4", "rank-1 action: applying factors mode-wise maps outer to outer", "",
         detail::trial_t4},
        {"T5", "kron(A,B)(C kr D) = (AC) kr (BD)", "", detail::trial_t5},
        {"T6", "kron transpose: kron(A,B)^T = kron(A^T,B^T)", "", detail::trial_t6},
        {"T7", "Sylvester vectorization in Kronecker-sum form", "corrected",
         detail::trial_t7},
        {"T8", "vec of an N-fold outer product is the Kronecker chain, same order", "",
         detail::trial_t8},
        {"T9", "mode product vs unfolding: Y = X mode-i U iff Y_(i) = U X_(i)", "",
         detail::trial_t9},
        {"T10", "vec of a multilinear action equals the Kronecker operator on vec", "",
         detail::trial_t10},
        {"T11", "unfolding of a multilinear action, factorized right side", "",
         detail::trial_t11},
        {"T12", "unfolding of a multilinear action via order-2 mode products", "",
         detail::trial_t12},
        {"T13", "CP unfolding as a sum of per-component Kronecker chains", "",
         detail::trial_t13},
        {"T14", "sum of columnwise Kronecker products equals (A kr B) ones", "",
         detail::trial_t14},
        {"T15", "CP unfolding in Khatri-Rao factorized form", "", detail::trial_t15},
        {"T16", "CP Jacobian against central finite differences", "", detail::trial_t16},
        {"T17", "Kronecker determinant rule against the dense determinant", "",
         detail::trial_t17},
        {"APP-A", "elementary operator products form a free family (full rank)", "",
         detail::trial_app_a},
    };
    return registry;
}

/// Runs one identity for cfg.trials randomized instances. Deterministic:
/// each trial derives its generator from (cfg.seed, identity index, trial).
inline CheckReport run_identity(std::string_view id, const TrialConfig& cfg) {
    if (cfg.trials < 1) {
        throw ArgumentError("trial count must be >= 1");
    }
    if (!(cfg.tolerance >= 0.0)) {
        throw ArgumentError("tolerance must be >= 0");
    }
    const auto& registry = identity_registry();
    std::size_t index = registry.size();
    for (std::size_t k = 0; k < registry.size(); ++k) {
        if (registry[k].id == id) {
            index = k;
            break;
        }
    }
    if (index == registry.size()) {
        throw LookupError("unknown identity id '" + std::string(id) + "'");
    }
    const IdentityCase& c = registry[index];

    CheckReport report;
    report.id = c.id;
    report.trials = cfg.trials;
    report.note = c.note;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(cfg.seed, index + 1, t);
        std::mt19937_64 eng(trial_seed);
        std::string shapes;
        double err;
        try {
            err = c.trial(eng, cfg, shapes);
        } catch (const Error& e) {
            err = std::numeric_limits<double>::infinity();
            shapes += std::string(shapes.empty() ? "" : " ") + "error: " + e.what();
        }
        if (err > report.max_rel_err) report.max_rel_err = err;
        if (err > cfg.tolerance && !report.counterexample) {
            report.counterexample = Counterexample{trial_seed, shapes};
        }
    }
    report.pass = report.max_rel_err <= cfg.tolerance;
    return report;
}

/// Runs the whole registry in order. Overall pass iff every report passes.
inline std::vector<CheckReport> run_all(const TrialConfig& cfg) {
    std::vector<CheckReport> reports;
    reports.reserve(identity_registry().size());
    for (const auto& c : identity_registry()) {
        reports.push_back(run_identity(c.id, cfg));
    }
    return reports;
}

/// Standalone free-family check for given space dimensions: builds the
/// elementary-operator bases of L(R^n, R^n') and L(R^m, R^m'), stacks all
/// kron(u_i, v_j) flattened to vectors and verifies full numerical rank
/// (threshold 1e-8 times the largest singular value).
inline CheckReport operator_basis_independence(std::size_t n, std::size_t np, std::size_t m,
                                               std::size_t mp,
                                               Mutation mutation = Mutation::none,
                                               std::size_t cap = 4096) {
    if (n == 0 || np == 0 || m == 0 || mp == 0) {
        throw ArgumentError("space dimensions must be >= 1");
    }
    if (n * np * m * mp > cap) {
        throw CapacityError("operator basis check: " + std::to_string(n * np * m * mp) +
                            " elements exceed the cap of " + std::to_string(cap));
    }
    CheckReport report;
    report.id = "APP-A";
    report.trials = 1;
    report.max_rel_err = detail::basis_independence_error(n, np, m, mp, mutation);
    report.pass = report.max_rel_err == 0.0;
    if (!report.pass) {
        report.counterexample =
            Counterexample{0, "n=" + std::to_string(n) + " n'=" + std::to_string(np) +
                                  " m=" + std::to_string(m) + " m'=" + std::to_string(mp)};
    }
    return report;
}

/// One line per report: id, trials, max relative error (17 significant
/// digits), pass, then the counterexample seed and note when present.
inline std::string format_report_line(const CheckReport& r) {
    char err[64];
    std::snprintf(err, sizeof(err), "%.17g", r.max_rel_err);
    std::string line = r.id + " " + std::to_string(r.trials) + " " + err + " " +
                       (r.pass ? "true" : "false");
    if (r.counterexample) {
        line += " seed=" + std::to_string(r.counterexample->seed);
    }
    if (!r.note.empty()) {
        line += " " + r.note;
    }
    return line;
}

}  // namespace lext
