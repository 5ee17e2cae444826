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

// Shared helpers for the unit tests: seeded generators and the brute-force
// oracles the library results are compared against.

#ifndef EMVS_TEST_SUPPORT_HPP
#define EMVS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "emvs/radar_model.hpp"
#include "emvs/tensor.hpp"

namespace testing
{

using emvs::cdouble;
using emvs::ComplexMatrix;
using emvs::ComplexTensor3;
using emvs::ComplexVector;
using emvs::Index;

inline cdouble random_complex(std::mt19937_64 &rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

/// Entries uniform in the unit disk.
inline cdouble random_unit_disk(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(u(rng));
    const double a = 2.0 * emvs::pi * u(rng);
    return std::polar(r, a);
}

inline ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64 &rng)
{
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = random_complex(rng);
    return m;
}

inline ComplexMatrix random_disk_matrix(Index rows, Index cols, std::mt19937_64 &rng)
{
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = random_unit_disk(rng);
    return m;
}

inline ComplexVector random_vector(Index n, std::mt19937_64 &rng)
{
    return random_matrix(n, 1, rng).col(0);
}

inline ComplexTensor3 random_tensor(emvs::Dims3 d, std::mt19937_64 &rng)
{
    ComplexTensor3 t(d);
    for (auto &v : t.data())
        v = random_complex(rng);
    return t;
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64 &rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Target drawn from the interior of every parameter domain.
inline emvs::TargetParams random_target(std::mt19937_64 &rng)
{
    using emvs::deg2rad;
    emvs::TargetParams p;
    p.theta_t = deg2rad(uniform(rng, 5, 85));
    p.phi_t = deg2rad(uniform(rng, 5, 355));
    p.gamma_t = deg2rad(uniform(rng, 5, 85));
    p.eta_t = deg2rad(uniform(rng, -175, 175));
    p.theta_r = deg2rad(uniform(rng, 5, 85));
    p.phi_r = deg2rad(uniform(rng, 5, 355));
    p.gamma_r = deg2rad(uniform(rng, 5, 85));
    p.eta_r = deg2rad(uniform(rng, -175, 175));
    return p;
}

// ---- oracles ----------------------------------------------------------------

/// Khatri-Rao by explicit loops over (i, j, k).
inline ComplexMatrix khatri_rao_loop(const ComplexMatrix &a, const ComplexMatrix &b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols());
    for (Index k = 0; k < a.cols(); ++k)
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < b.rows(); ++j)
                out(i * b.rows() + j, k) = a(i, k) * b(j, k);
    return out;
}

/// T[i1,i2,i3] = sum_k F1 F2 F3 by a quadruple loop.
inline std::vector<cdouble> cp_triple_loop(const ComplexMatrix &f1, const ComplexMatrix &f2,
                                           const ComplexMatrix &f3)
{
    std::vector<cdouble> out(static_cast<std::size_t>(f1.rows() * f2.rows() * f3.rows()));
    for (Index i3 = 0; i3 < f3.rows(); ++i3)
        for (Index i2 = 0; i2 < f2.rows(); ++i2)
            for (Index i1 = 0; i1 < f1.rows(); ++i1)
            {
                cdouble s = 0;
                for (Index k = 0; k < f1.cols(); ++k)
                    s += f1(i1, k) * f2(i2, k) * f3(i3, k);
                out[static_cast<std::size_t>(i1 + f1.rows() * (i2 + f2.rows() * i3))] = s;
            }
    return out;
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexTensor3 &a, const ComplexTensor3 &b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

/// Minimum total cost over all permutations; perm[i] = column for row i.
inline std::vector<int> exhaustive_assignment(const std::vector<std::vector<double>> &cost)
{
    std::vector<int> p(cost.size());
    std::iota(p.begin(), p.end(), 0);
    std::vector<int> best = p;
    double best_cost = INFINITY;
    do
    {
        double c = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            c += cost[i][static_cast<std::size_t>(p[i])];
        if (c < best_cost)
        {
            best_cost = c;
            best = p;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

/// Shortest signed arc between two angles.
inline double arc(double a, double b)
{
    return std::remainder(a - b, 2.0 * emvs::pi);
}

} // namespace testing

#endif
