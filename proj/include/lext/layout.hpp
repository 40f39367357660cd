// SPDX-License-Identifier: MIT
#pragma once

// Vectorization and matricization under the lexicographic convention, plus
// two deliberately independent constructions used to cross-check it:
//
//  - matricize() works directly from the index relation: mode i becomes the
//    row index, the remaining modes (in ascending order) pack the columns
//    lexicographically.
//  - matricize_oracle() replays the permute-then-column-major-reshape recipe
//    (the MATLAB idiom), including the descending trailing-mode permutation.
//
// The two must agree elementwise; their equality is a core acceptance test.
//
// All modes in this API are 0-based. The CLI converts from the 1-based
// numbering used in user-facing text.

#include "lext/error.hpp"
#include "lext/matrix.hpp"
#include "lext/shape.hpp"
#include "lext/tensor.hpp"

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace lext {

/// vec under the lexicographic order: the flat data reinterpreted as a
/// column vector, no permutation needed.
inline DenseMatrix vec(const DenseTensor& t) {
    return DenseMatrix(t.numel(), 1, std::vector<double>(t.data().begin(), t.data().end()));
}

/// Inverse of vec.
inline DenseTensor unvec(const DenseMatrix& v, const Shape& shape) {
    if (v.cols() != 1) {
        throw ShapeError("unvec expects a column vector, got " + std::to_string(v.rows()) +
                         "x" + std::to_string(v.cols()));
    }
    if (v.rows() != shape.numel()) {
        throw ShapeError("unvec length " + std::to_string(v.rows()) +
                         " does not match shape " + to_string(shape));
    }
    return DenseTensor(shape, std::vector<double>(v.data().begin(), v.data().end()));
}

inline void check_mode(const Shape& s, std::size_t mode) {
    if (mode >= s.order()) {
        throw ArgumentError("mode " + std::to_string(mode + 1) + " out of range for order-" +
                            std::to_string(s.order()) + " tensor (valid modes: 1.." +
                            std::to_string(s.order()) + ")");
    }
}

/// Mode-i unfolding Y_(i): rows indexed by mode i, columns packing the
/// remaining modes in ascending order, last index fastest.
///
/// With pre = prod_{l<i} n_l and post = prod_{l>i} n_l, the flat offset
/// decomposes as a*(n_i*post) + r*post + b, and the column index is simply
/// a*post + b.
inline DenseMatrix matricize(const DenseTensor& t, std::size_t mode) {
    check_mode(t.shape(), mode);
    const Shape& s = t.shape();
    std::size_t pre = 1, post = 1;
    for (std::size_t l = 0; l < mode; ++l) pre *= s.dim(l);
    for (std::size_t l = mode + 1; l < s.order(); ++l) post *= s.dim(l);
    const std::size_t n = s.dim(mode);

    DenseMatrix out(n, pre * post);
    for (std::size_t a = 0; a < pre; ++a) {
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t src = (a * n + r) * post;
            const std::size_t dst = r * (pre * post) + a * post;
            for (std::size_t b = 0; b < post; ++b) {
                out.data()[dst + b] = t[src + b];
            }
        }
    }
    return out;
}

/// Inverse of matricize.
inline DenseTensor dematricize(const DenseMatrix& m, std::size_t mode, const Shape& shape) {
    check_mode(shape, mode);
    std::size_t pre = 1, post = 1;
    for (std::size_t l = 0; l < mode; ++l) pre *= shape.dim(l);
    for (std::size_t l = mode + 1; l < shape.order(); ++l) post *= shape.dim(l);
    const std::size_t n = shape.dim(mode);
    if (m.rows() != n || m.cols() != pre * post) {
        throw ShapeError("dematricize: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(n) + "x" +
                         std::to_string(pre * post) + " for mode " + std::to_string(mode + 1) +
                         " of shape " + to_string(shape));
    }
    DenseTensor out(shape);
    for (std::size_t a = 0; a < pre; ++a) {
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t dst = (a * n + r) * post;
            const std::size_t src = r * (pre * post) + a * post;
            for (std::size_t b = 0; b < post; ++b) {
                out[dst + b] = m.data()[src + b];
            }
        }
    }
    return out;
}

/// Reorders modes: the output has shape (n_{perm(1)}, ...) and its entry at
/// (i_{perm(1)}, ...) equals the input entry at (i_1, ...). perm is 0-based.
inline DenseTensor permute_modes(const DenseTensor& t, const std::vector<std::size_t>& perm) {
    const Shape& s = t.shape();
    if (perm.size() != s.order()) {
        throw ArgumentError("permutation has " + std::to_string(perm.size()) +
                            " entries, tensor order is " + std::to_string(s.order()));
    }
    std::vector<bool> seen(s.order(), false);
    for (std::size_t p : perm) {
        if (p >= s.order() || seen[p]) {
            throw ArgumentError("not a permutation of modes 1.." + std::to_string(s.order()));
        }
        seen[p] = true;
    }

    std::vector<std::size_t> out_dims(s.order());
    for (std::size_t k = 0; k < s.order(); ++k) out_dims[k] = s.dim(perm[k]);
    const Shape out_shape{std::vector<std::size_t>(out_dims)};

    // out at (j_1..j_N) = in at (i_1..i_N) with j_k = i_{perm(k)}.
    const std::vector<std::size_t> in_strides = strides(s);
    DenseTensor out(out_shape);
    MultiIndex j(s.order(), 0);
    std::size_t flat = 0;
    do {
        std::size_t src = 0;
        for (std::size_t k = 0; k < s.order(); ++k) src += j[k] * in_strides[perm[k]];
        out[flat++] = t[src];
    } while (next_multi_index(out_shape, j));
    return out;
}

/// Mode-i unfolding via the permute-reshape recipe: permute modes to
/// (i, N, N-1, ..., skipping i) and flatten column-major (first index
/// fastest) into n_i rows. Matches the MATLAB reshape/permute code for
/// order 3 and generalizes it to any order.
inline DenseMatrix matricize_oracle(const DenseTensor& t, std::size_t mode) {
    check_mode(t.shape(), mode);
    const std::size_t order = t.order();

    std::vector<std::size_t> perm;
    perm.reserve(order);
    perm.push_back(mode);
    for (std::size_t k = order; k-- > 0;) {
        if (k != mode) perm.push_back(k);
    }
    const DenseTensor p = permute_modes(t, perm);

    const std::size_t n = t.shape().dim(mode);
    const std::size_t cols = t.numel() / n;

    // Column-major strides of the permuted tensor: first index fastest.
    std::vector<std::size_t> cm_strides(order);
    std::size_t acc = 1;
    for (std::size_t k = 0; k < order; ++k) {
        cm_strides[k] = acc;
        acc *= p.shape().dim(k);
    }

    DenseMatrix out(n, cols);
    MultiIndex m(order, 0);
    do {
        std::size_t cm_pos = 0;
        for (std::size_t k = 0; k < order; ++k) cm_pos += m[k] * cm_strides[k];
        out(cm_pos % n, cm_pos / n) = p.at(m);
    } while (next_multi_index(p.shape(), m));
    return out;
}

/// Reinterprets a matrix as an order-2 tensor. Row-major matrix entries and
/// the lexicographic layout coincide, so no data moves.
inline DenseTensor matrix_as_tensor(const DenseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ShapeError("cannot view an empty matrix as a tensor");
    }
    return DenseTensor(Shape{m.rows(), m.cols()},
                       std::vector<double>(m.data().begin(), m.data().end()));
}

/// Inverse of matrix_as_tensor.
inline DenseMatrix tensor_as_matrix(const DenseTensor& t) {
    if (t.order() != 2) {
        throw ShapeError("tensor_as_matrix expects an order-2 tensor, got order " +
                         std::to_string(t.order()));
    }
    return DenseMatrix(t.shape().dim(0), t.shape().dim(1),
                       std::vector<double>(t.data().begin(), t.data().end()));
}

/// Permutation p relating the two vectorization conventions: for every
/// multi-index, p[lexicographic offset] = column-major offset (position
/// (k-1)IJ + (j-1)I + i of the classic convention, 0-based here). Writing
/// classic[p[q]] = lex[q] produces the classic column-major vector.
inline std::vector<std::size_t> classic_vec_permutation(const Shape& s) {
    // Classic (first index fastest) strides: cstride_k = prod_{l < k} n_l.
    std::vector<std::size_t> cstrides(s.order());
    std::size_t acc = 1;
    for (std::size_t k = 0; k < s.order(); ++k) {
        cstrides[k] = acc;
        acc *= s.dim(k);
    }

    std::vector<std::size_t> p(s.numel());
    MultiIndex m(s.order(), 0);
    std::size_t lex = 0;
    do {
        std::size_t classic = 0;
        for (std::size_t k = 0; k < s.order(); ++k) classic += m[k] * cstrides[k];
        p[lex++] = classic;
    } while (next_multi_index(s, m));
    return p;
}

}  // namespace lext
