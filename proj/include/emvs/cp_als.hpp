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

// Rank-K CP (PARAFAC) decomposition of a complex 3-way tensor by trilinear
// alternating least squares.
//
// One sweep performs, in order n = 1, 2, 3,
//   F_n <- unfold_n(T) * pinv(khatri_rao(F_next2, F_next1)^T)
// using the unfolding convention of tensor.hpp. The pseudo-inverse is
// formed from the K x K Gram matrix (F_a^H F_a) .* (F_b^H F_b); singular
// values of the Khatri-Rao product below 1e-12 * sigma_max are truncated.

#ifndef EMVS_CP_ALS_HPP
#define EMVS_CP_ALS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "emvs/tensor.hpp"

namespace emvs
{

struct CpFactors
{
    ComplexMatrix f1;
    ComplexMatrix f2;
    ComplexMatrix f3;

    Index rank() const { return f1.cols(); }
    const ComplexMatrix &mode(int n) const { return n == 1 ? f1 : n == 2 ? f2 : f3; }
    ComplexMatrix &mode(int n) { return n == 1 ? f1 : n == 2 ? f2 : f3; }

    /// Throws ErrorCode::dimension when the three ranks differ.
    void validate() const;
};

struct AlsOptions
{
    Index rank = 1;
    int max_iters = 500;
    double rel_tol = 1e-8; // stop when |r_prev - r| < rel_tol * r_prev
    int restarts = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AlsReport
{
    int iterations = 0;          // full sweeps of the selected restart
    double final_residual = 0.0; // ||T - [[F]]||_F / ||T||_F
    bool converged = false;
    int restart_index = 0;
    bool regularized = false;     // a truncated pseudo-inverse was needed
    bool uniqueness_risk = false; // rank violates the generic Kruskal bound for these dims
    std::vector<double> residual_history; // [0] = initial guess, then one per sweep
};

struct CpResult
{
    CpFactors factors;
    AlsReport report;
};

/// Relative residual below which a run counts as having reached the
/// floating-point floor.
inline constexpr double residual_floor = 1e-13;

CpResult cp_als(const ComplexTensor3 &t, const AlsOptions &opts);

/// ||T - cp_reconstruct(F)||_F / ||T||_F; the absolute error when T = 0.
double residual(const ComplexTensor3 &t, const CpFactors &f);

/// 2K + 2 <= min(I1,K) + min(I2,K) + min(I3,K): Kruskal's condition under the
/// assumption that every factor has generic (maximal) k-rank.
bool generic_kruskal_holds(Dims3 dims, Index rank);

/// |<x, y>| / (||x|| ||y||); 0 when either vector is zero.
double column_congruence(const ComplexVector &x, const ComplexVector &y);

struct Alignment
{
    CpFactors aligned;               // est columns permuted into ref order and rescaled
    std::vector<Index> permutation;  // ref column l <- est column permutation[l]
    std::array<ComplexVector, 3> scales; // per mode, per ref column
    std::vector<double> congruence;  // product over modes, per ref column
};

/// Greedy maximum-congruence column matching of `est` onto `ref`; each
/// matched column is rescaled per mode by the least-squares factor.
Alignment align_factors(const CpFactors &est, const CpFactors &ref);

} // namespace emvs

#endif
