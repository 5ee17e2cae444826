// SPDX-License-Identifier: Apache-2.0
//
// emvs-parafac: angle and polarization estimation for bistatic EMVS-MIMO radar
// Copyright (C) 2026 The emvs-parafac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "emvs/tensor.hpp"
#include "support.hpp"

using namespace emvs;
using testing::max_abs_diff;

namespace
{

ComplexMatrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
    ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto &r : rows)
    {
        Index j = 0;
        for (double v : r)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

void check_error(ErrorCode code, auto &&fn)
{
    try
    {
        fn();
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("tensor construction validates dims, length and finiteness")
{
    check_error(ErrorCode::dimension, [] { ComplexTensor3 t({0, 2, 2}); });
    check_error(ErrorCode::dimension, [] { ComplexTensor3 t({2, 2, 2}, std::vector<cdouble>(7)); });
    std::vector<cdouble> v(8);
    v[3] = {std::numeric_limits<double>::quiet_NaN(), 0};
    check_error(ErrorCode::numerical, [&] { ComplexTensor3 t({2, 2, 2}, v); });

    ComplexTensor3 t({2, 3, 4});
    t(1, 2, 3) = {1, 2};
    CHECK(t.data()[1 + 2 * (2 + 3 * 3)] == cdouble(1, 2));
    CHECK(t.frobenius_norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("khatri_rao on unit examples")
{
    CHECK(max_abs_diff(khatri_rao(mat({{1}, {2}}), mat({{3}, {4}})), mat({{3}, {4}, {6}, {8}})) == 0.0);
    CHECK(max_abs_diff(khatri_rao(mat({{1, 0}, {0, 1}}), mat({{1, 1}, {1, -1}})),
                       mat({{1, 0}, {1, 0}, {0, 1}, {0, -1}})) == 0.0);
}

TEST_CASE("khatri_rao matches the loop oracle and nests associatively")
{
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep)
    {
        const auto a = testing::random_matrix(3, 2, rng);
        const auto b = testing::random_matrix(4, 2, rng);
        const auto c = testing::random_matrix(5, 2, rng);
        CHECK(max_abs_diff(khatri_rao(a, b), testing::khatri_rao_loop(a, b)) < 1e-15);
        CHECK(max_abs_diff(khatri_rao(khatri_rao(a, b), c), khatri_rao(a, khatri_rao(b, c))) < 1e-14);
        for (Index k = 0; k < 2; ++k)
            CHECK(max_abs_diff(khatri_rao(a, b).col(k), kron(a.col(k), b.col(k))) == 0.0);
    }
    check_error(ErrorCode::dimension,
                [&] { khatri_rao(testing::random_matrix(2, 2, rng), testing::random_matrix(2, 3, rng)); });
}

TEST_CASE("cp_reconstruct")
{
    SUBCASE("rank-1 outer product")
    {
        const auto t = cp_reconstruct(mat({{1}, {2}}), mat({{1}, {-1}}), mat({{1}}));
        CHECK(t.dims() == Dims3{2, 2, 1});
        CHECK(max_abs_diff(ComplexMatrix(t.frontal(0)), mat({{1, -1}, {2, -2}})) == 0.0);
    }
    SUBCASE("zero factors give the zero tensor")
    {
        const auto t = cp_reconstruct(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(4, 3), ComplexMatrix::Zero(5, 3));
        CHECK(t.frobenius_norm() == 0.0);
    }
    SUBCASE("matches the triple-loop sum")
    {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 20; ++rep)
        {
            const auto f1 = testing::random_matrix(2, 2, rng);
            const auto f2 = testing::random_matrix(2, 2, rng);
            const auto f3 = testing::random_matrix(2, 2, rng);
            const ComplexTensor3 oracle({2, 2, 2}, testing::cp_triple_loop(f1, f2, f3));
            CHECK(max_abs_diff(cp_reconstruct(f1, f2, f3), oracle) < 1e-14);
        }
        const auto f1 = testing::random_matrix(4, 3, rng);
        const auto f2 = testing::random_matrix(5, 3, rng);
        const auto f3 = testing::random_matrix(6, 3, rng);
        const ComplexTensor3 oracle({4, 5, 6}, testing::cp_triple_loop(f1, f2, f3));
        CHECK(max_abs_diff(cp_reconstruct(f1, f2, f3), oracle) < 1e-13);
    }
    SUBCASE("rank mismatch")
    {
        check_error(ErrorCode::dimension, [] {
            cp_reconstruct(ComplexMatrix::Ones(2, 2), ComplexMatrix::Ones(2, 1), ComplexMatrix::Ones(2, 2));
        });
    }
}

TEST_CASE("unfold follows the pinned index convention")
{
    ComplexTensor3 t({2, 2, 1});
    t(0, 0, 0) = 1;
    t(0, 1, 0) = 2;
    t(1, 0, 0) = 3;
    t(1, 1, 0) = 4;
    CHECK(max_abs_diff(unfold(t, 1), mat({{1, 2}, {3, 4}})) == 0.0);

    std::mt19937_64 rng(3);
    const auto r = testing::random_tensor({3, 4, 5}, rng);
    const auto u1 = unfold(r, 1), u2 = unfold(r, 2), u3 = unfold(r, 3);
    REQUIRE(u1.rows() == 3);
    REQUIRE(u1.cols() == 20);
    REQUIRE(u2.rows() == 4);
    REQUIRE(u2.cols() == 15);
    REQUIRE(u3.rows() == 5);
    REQUIRE(u3.cols() == 12);
    for (Index i1 = 0; i1 < 3; ++i1)
        for (Index i2 = 0; i2 < 4; ++i2)
            for (Index i3 = 0; i3 < 5; ++i3)
            {
                CHECK(u1(i1, i3 * 4 + i2) == r(i1, i2, i3));
                CHECK(u2(i2, i1 * 5 + i3) == r(i1, i2, i3));
                CHECK(u3(i3, i2 * 3 + i1) == r(i1, i2, i3));
            }

    check_error(ErrorCode::argument, [&] { unfold(r, 0); });
    check_error(ErrorCode::argument, [&] { unfold(r, 4); });
}

TEST_CASE("unfoldings of a CP tensor factor through Khatri-Rao products")
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 25; ++rep)
    {
        const Index i1 = testing::uniform_int(rng, 1, 5), i2 = testing::uniform_int(rng, 1, 5),
                    i3 = testing::uniform_int(rng, 1, 5), k = testing::uniform_int(rng, 1, 4);
        const auto f1 = testing::random_disk_matrix(i1, k, rng);
        const auto f2 = testing::random_disk_matrix(i2, k, rng);
        const auto f3 = testing::random_disk_matrix(i3, k, rng);
        const auto t = cp_reconstruct(f1, f2, f3);
        const double scale = std::max(t.frobenius_norm(), 1e-300);
        CHECK((unfold(t, 1) - f1 * khatri_rao(f3, f2).transpose()).norm() / scale < 1e-12);
        CHECK((unfold(t, 2) - f2 * khatri_rao(f1, f3).transpose()).norm() / scale < 1e-12);
        CHECK((unfold(t, 3) - f3 * khatri_rao(f2, f1).transpose()).norm() / scale < 1e-12);

        // Slice form: T[:,:,i3]^T = F2 diag(F3[i3,:]) F1^T.
        for (Index s = 0; s < i3; ++s)
        {
            const ComplexMatrix slice_t = f2 * f3.row(s).transpose().asDiagonal() * f1.transpose();
            CHECK((ComplexMatrix(t.frontal(s).transpose()) - slice_t).norm() / scale < 1e-12);
            CHECK(max_abs_diff(ComplexMatrix(t.frontal(s)), unfold(t, 1).middleCols(s * i2, i2)) == 0.0);
        }
    }
}

TEST_CASE("fold inverts unfold")
{
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 10; ++rep)
    {
        const Dims3 d{testing::uniform_int(rng, 1, 4), testing::uniform_int(rng, 1, 4), testing::uniform_int(rng, 1, 4)};
        const auto t = testing::random_tensor(d, rng);
        for (int m = 1; m <= 3; ++m)
        {
            const auto u = unfold(t, m);
            CHECK(max_abs_diff(fold(u, m, d), t) == 0.0);
            CHECK(max_abs_diff(unfold(fold(u, m, d), m), u) == 0.0);
        }
    }
    const auto scalar = fold(mat({{5}}), 1, {1, 1, 1});
    CHECK(scalar(0, 0, 0) == cdouble(5, 0));
    check_error(ErrorCode::dimension, [] { fold(ComplexMatrix::Ones(2, 3), 1, {2, 2, 2}); });
    check_error(ErrorCode::argument, [] { fold(ComplexMatrix::Ones(2, 4), 7, {2, 2, 2}); });
}

TEST_CASE("ivec_row and vec_row")
{
    ComplexVector v(6);
    v << 1, 2, 3, 4, 5, 6;
    CHECK(max_abs_diff(ivec_row(v, 2, 3), mat({{1, 2, 3}, {4, 5, 6}})) == 0.0);
    check_error(ErrorCode::dimension, [&] { ivec_row(v, 4, 2); });

    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 10; ++rep)
    {
        const Index p = testing::uniform_int(rng, 1, 6), q = testing::uniform_int(rng, 1, 6);
        const auto m = testing::random_matrix(p, q, rng);
        CHECK(max_abs_diff(ivec_row(vec_row(m), p, q), m) == 0.0);

        // ivec_row(a ⊗ b) = a bᵀ, entry by entry.
        const auto a = testing::random_vector(p, rng);
        const auto b = testing::random_vector(q, rng);
        const auto outer = ivec_row(kron(a, b), p, q);
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < q; ++j)
                CHECK(std::abs(outer(i, j) - a(i) * b(j)) < 1e-15);

        // Linearity over a sum of Kronecker products.
        const Index k = testing::uniform_int(rng, 1, 4);
        const auto as = testing::random_matrix(p, k, rng);
        const auto bs = testing::random_matrix(q, k, rng);
        ComplexVector sum = ComplexVector::Zero(p * q);
        for (Index c = 0; c < k; ++c)
            sum += kron(as.col(c), bs.col(c));
        CHECK(max_abs_diff(ivec_row(sum, p, q), as * bs.transpose()) < 1e-13);
    }
}

TEST_CASE("require_finite rejects NaN and infinity")
{
    ComplexMatrix m = ComplexMatrix::Ones(2, 2);
    CHECK_NOTHROW(require_finite(m, "m"));
    m(1, 1) = {0, std::numeric_limits<double>::infinity()};
    check_error(ErrorCode::numerical, [&] { require_finite(m, "m"); });
}
