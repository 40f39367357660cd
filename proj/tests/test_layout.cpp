// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "lext/layout.hpp"
#include "lext/kron.hpp"
#include "lext/random.hpp"

#include "support/oracles.hpp"

#include <random>
#include <vector>

using namespace lext;

namespace {

DenseTensor counting_tensor(const Shape& s) {
    std::vector<double> data(s.numel());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<double>(i + 1);
    return DenseTensor(s, std::move(data));
}

DenseTensor random_tensor(std::mt19937_64& eng, const Shape& s) {
    DenseTensor t(s);
    for (auto& x : t.data()) x = uniform_pm1(eng);
    return t;
}

}  // namespace

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(Shape{std::vector<std::size_t>{}}, ArgumentError);
    CHECK_THROWS_AS((Shape{2, 0, 3}), ShapeError);
    CHECK_THROWS_AS((Shape{std::size_t{1} << 32, std::size_t{1} << 32}), CapacityError);
    CHECK(Shape{2, 3, 4}.numel() == 24);
    CHECK(Shape{7}.order() == 1);
}

TEST_CASE("linear index follows the lexicographic position formula") {
    const Shape s{2, 2, 2};
    // 1-based (i,j,k) = (2,1,2) sits at 1-based position (i-1)*JK + (j-1)*K + k = 6.
    CHECK(linear_index(s, {1, 0, 1}) == 5);

    const Shape vec_shape{9};
    for (std::size_t i = 0; i < 9; ++i) CHECK(linear_index(vec_shape, {i}) == i);

    // All 24 multi-indices of (2,3,4) in lexicographic order hit offsets 0..23.
    const Shape s234{2, 3, 4};
    MultiIndex m(3, 0);
    std::size_t expected = 0;
    do {
        CHECK(linear_index(s234, m) == expected);
        ++expected;
    } while (next_multi_index(s234, m));
    CHECK(expected == 24);
}

TEST_CASE("linear index rejects out-of-range components naming the mode") {
    const Shape s{2, 3, 4};
    CHECK_THROWS_WITH(linear_index(s, {0, 3, 0}), Catch::Matchers::ContainsSubstring("mode 2"));
    CHECK_THROWS_AS(linear_index(s, {0, 0}), IndexError);
}

TEST_CASE("multi index inverts linear index") {
    const Shape s{2, 2, 2};
    CHECK(multi_index(s, 0) == MultiIndex{0, 0, 0});
    CHECK(multi_index(s, 5) == MultiIndex{1, 0, 1});
    CHECK(multi_index(Shape{4}, 3) == MultiIndex{3});
    CHECK_THROWS_AS(multi_index(s, 8), IndexError);
}

TEST_CASE("index maps are mutual inverses over whole ranges") {
    std::mt19937_64 eng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t order = 1 + uniform_index(eng, 5);
        std::vector<std::size_t> dims(order);
        for (auto& d : dims) d = 1 + uniform_index(eng, 6);
        const Shape s{std::move(dims)};
        for (std::size_t o = 0; o < s.numel(); ++o) {
            CHECK(linear_index(s, multi_index(s, o)) == o);
        }
    }
}

TEST_CASE("vec is a plain reinterpretation") {
    const DenseTensor t = counting_tensor(Shape{2, 2, 2});
    const DenseMatrix v = vec(t);
    REQUIRE(v.rows() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(v(i, 0) == static_cast<double>(i + 1));

    const DenseTensor z = counting_tensor(Shape{5});
    CHECK(vec(z).rows() == 5);
    CHECK(vec(z)(4, 0) == 5.0);
}

TEST_CASE("vec of an outer product equals the Kronecker product of the vectors") {
    const DenseTensor t = outer({{1.0, 2.0}, {3.0, 4.0}});
    const DenseMatrix v = vec(t);
    const std::vector<double> expected = {3.0, 4.0, 6.0, 8.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(v(i, 0) == expected[i]);
    CHECK(relative_error(v, kron(DenseMatrix::column({1.0, 2.0}),
                                 DenseMatrix::column({3.0, 4.0}))) == 0.0);
}

TEST_CASE("unvec inverts vec bitwise") {
    const DenseTensor t = counting_tensor(Shape{2, 2, 2});
    CHECK(t.at({0, 0, 0}) == 1.0);
    CHECK(unvec(vec(t), t.shape()).at({1, 1, 1}) == 8.0);

    std::mt19937_64 eng(3);
    const DenseTensor r = random_tensor(eng, Shape{3, 4, 5});
    CHECK(unvec(vec(r), r.shape()) == r);

    CHECK_THROWS_AS(unvec(DenseMatrix(7, 1), Shape{2, 2, 2}), ShapeError);
    CHECK_THROWS_AS(unvec(DenseMatrix(8, 2), Shape{2, 2, 2}), ShapeError);
}

TEST_CASE("matricize of the counting 2x2x2 tensor") {
    const DenseTensor t = counting_tensor(Shape{2, 2, 2});

    const DenseMatrix m1 = matricize(t, 0);
    const std::vector<double> r1 = {1, 2, 3, 4, 5, 6, 7, 8};
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(m1(0, c) == r1[c]);
        CHECK(m1(1, c) == r1[4 + c]);
    }

    const DenseMatrix m2 = matricize(t, 1);
    const std::vector<double> row0 = {1, 2, 5, 6}, row1 = {3, 4, 7, 8};
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(m2(0, c) == row0[c]);
        CHECK(m2(1, c) == row1[c]);
    }

    const DenseMatrix m3 = matricize(t, 2);
    const std::vector<double> t0 = {1, 3, 5, 7}, t1 = {2, 4, 6, 8};
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(m3(0, c) == t0[c]);
        CHECK(m3(1, c) == t1[c]);
    }

    CHECK_THROWS_AS(matricize(t, 3), ArgumentError);
}

TEST_CASE("matricize of a rank-1 tensor is the outer product with the Kronecker chain") {
    const std::vector<double> a = {1.0, -2.0}, b = {0.5, 3.0, 1.0}, c = {2.0, -1.0};
    const DenseTensor t = outer({a, b, c});
    const DenseMatrix lhs = matricize(t, 0);
    const DenseMatrix rhs = DenseMatrix::column(a) *
                            transpose(kron(DenseMatrix::column(b), DenseMatrix::column(c)));
    CHECK(relative_error(lhs, rhs) < 1e-15);
}

TEST_CASE("matricize of an order-2 tensor is itself at mode 1 and its transpose at mode 2") {
    std::mt19937_64 eng(11);
    const DenseTensor t = random_tensor(eng, Shape{3, 5});
    const DenseMatrix m = tensor_as_matrix(t);
    CHECK(matricize(t, 0) == m);
    CHECK(matricize(t, 1) == transpose(m));
}

TEST_CASE("dematricize inverts matricize exactly for every mode") {
    std::mt19937_64 eng(13);
    const DenseTensor t = random_tensor(eng, Shape{3, 4, 5});
    for (std::size_t mode = 0; mode < 3; ++mode) {
        CHECK(dematricize(matricize(t, mode), mode, t.shape()) == t);
    }

    const DenseMatrix m(2, 4, {1, 2, 5, 6, 3, 4, 7, 8});
    CHECK(dematricize(m, 1, Shape{2, 2, 2}) == counting_tensor(Shape{2, 2, 2}));

    CHECK_THROWS_AS(dematricize(DenseMatrix(3, 4), 0, Shape{2, 2, 2}), ShapeError);
}

TEST_CASE("matricize and the permute-reshape oracle coincide") {
    std::mt19937_64 eng(17);
    // Sampled here; the acceptance suite covers all order-3 shapes up to 6.
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<std::size_t> dims(3);
        for (auto& d : dims) d = 1 + uniform_index(eng, 6);
        const DenseTensor t = random_tensor(eng, Shape{std::move(dims)});
        for (std::size_t mode = 0; mode < 3; ++mode) {
            CHECK(matricize(t, mode) == matricize_oracle(t, mode));
        }
    }

    const DenseTensor t8 = counting_tensor(Shape{2, 2, 2});
    const DenseMatrix o1 = matricize_oracle(t8, 0);
    const std::vector<double> r1 = {1, 2, 3, 4, 5, 6, 7, 8};
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(o1(0, c) == r1[c]);
        CHECK(o1(1, c) == r1[4 + c]);
    }
}

TEST_CASE("the oracle also covers orders 2 and 4") {
    std::mt19937_64 eng(19);
    const DenseTensor m = random_tensor(eng, Shape{4, 3});
    CHECK(matricize_oracle(m, 0) == tensor_as_matrix(m));
    CHECK(matricize_oracle(m, 1) == transpose(tensor_as_matrix(m)));

    const DenseTensor t = random_tensor(eng, Shape{2, 3, 2, 4});
    for (std::size_t mode = 0; mode < 4; ++mode) {
        CHECK(matricize(t, mode) == matricize_oracle(t, mode));
    }
}

TEST_CASE("permute_modes") {
    std::mt19937_64 eng(23);
    const DenseTensor t = random_tensor(eng, Shape{2, 3, 4});

    SECTION("identity permutation is bitwise identity") {
        CHECK(permute_modes(t, {0, 1, 2}) == t);
    }
    SECTION("order-2 swap is transpose") {
        const DenseTensor m = random_tensor(eng, Shape{3, 5});
        CHECK(tensor_as_matrix(permute_modes(m, {1, 0})) == transpose(tensor_as_matrix(m)));
    }
    SECTION("index relation holds for a 3-cycle") {
        const DenseTensor p = permute_modes(t, {2, 0, 1});
        REQUIRE(p.shape() == Shape{4, 2, 3});
        for (int rep = 0; rep < 5; ++rep) {
            const MultiIndex m = {uniform_index(eng, 2), uniform_index(eng, 3),
                                  uniform_index(eng, 4)};
            CHECK(p.at({m[2], m[0], m[1]}) == t.at(m));
        }
    }
    SECTION("permutation followed by its inverse is identity") {
        const DenseTensor p = permute_modes(t, {2, 0, 1});
        CHECK(permute_modes(p, {1, 2, 0}) == t);
    }
    SECTION("rejects non-permutations") {
        CHECK_THROWS_AS(permute_modes(t, {0, 1}), ArgumentError);
        CHECK_THROWS_AS(permute_modes(t, {0, 0, 1}), ArgumentError);
        CHECK_THROWS_AS(permute_modes(t, {0, 1, 3}), ArgumentError);
    }
}

TEST_CASE("classic_vec_permutation matches both position formulas") {
    SECTION("2x2 example") {
        const DenseTensor t = counting_tensor(Shape{2, 2});
        const auto p = classic_vec_permutation(t.shape());
        const DenseMatrix v = vec(t);
        std::vector<double> classic(4);
        for (std::size_t q = 0; q < 4; ++q) classic[p[q]] = v(q, 0);
        CHECK(classic == std::vector<double>{1, 3, 2, 4});
    }
    SECTION("order-1 is the identity") {
        const auto p = classic_vec_permutation(Shape{6});
        for (std::size_t q = 0; q < 6; ++q) CHECK(p[q] == q);
    }
    SECTION("sends every lexicographic offset to the classic offset") {
        const Shape s{2, 2, 2};
        const auto p = classic_vec_permutation(s);
        MultiIndex m(3, 0);
        do {
            const std::size_t lex = linear_index(s, m);
            const std::size_t classic = m[0] + 2 * m[1] + 4 * m[2];
            CHECK(p[lex] == classic);
        } while (next_multi_index(s, m));
    }
    SECTION("is a bijection on shapes up to 1000 elements") {
        oracles::enumerate_shapes(1, 4, 10, 1000, [](const Shape& s) {
            const auto p = classic_vec_permutation(s);
            std::vector<bool> seen(s.numel(), false);
            for (std::size_t v : p) {
                REQUIRE(v < s.numel());
                REQUIRE(!seen[v]);
                seen[v] = true;
            }
        });
    }
}

TEST_CASE("inverse pairs are bitwise over random shapes up to order 5") {
    std::mt19937_64 eng(29);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t order = 1 + uniform_index(eng, 5);
        std::vector<std::size_t> dims(order);
        for (auto& d : dims) d = 1 + uniform_index(eng, 6);
        const DenseTensor t = random_tensor(eng, Shape{std::move(dims)});
        CHECK(unvec(vec(t), t.shape()) == t);
        for (std::size_t mode = 0; mode < order; ++mode) {
            CHECK(dematricize(matricize(t, mode), mode, t.shape()) == t);
        }
    }
}

TEST_CASE("vec of an N-fold outer product is the Kronecker chain, bit for bit") {
    std::mt19937_64 eng(31);
    const std::vector<std::vector<double>> vs = {random_tensor(eng, Shape{3}).take_data(),
                                                 random_tensor(eng, Shape{2}).take_data(),
                                                 random_tensor(eng, Shape{4}).take_data()};
    const DenseMatrix lhs = vec(outer(std::span<const std::vector<double>>(vs)));
    const DenseMatrix rhs = kron({DenseMatrix::column(vs[0]), DenseMatrix::column(vs[1]),
                                  DenseMatrix::column(vs[2])});
    CHECK(lhs == rhs);
}

TEST_CASE("matrix/tensor reinterpretation bridges") {
    const DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    const DenseTensor t = matrix_as_tensor(m);
    CHECK(t.shape() == Shape{2, 3});
    CHECK(t.at({1, 2}) == 6.0);
    CHECK(tensor_as_matrix(t) == m);
    CHECK_THROWS_AS(tensor_as_matrix(counting_tensor(Shape{2, 2, 2})), ShapeError);
}
