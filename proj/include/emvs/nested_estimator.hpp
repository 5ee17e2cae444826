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

// Nested PARAFAC estimation of the eight angle/polarization parameters per
// target, plus the single-stage PARAFAC baseline.
//
// Pipeline (estimate_nested):
//   1. outer CP of the (6MN, 6, L) snapshot tensor -> A_tqr, Q_r, S^T
//   2. receive (θ, φ, γ, η) per column of Q_r from the Poynting vector and
//      the polarization state
//   3. sum the columns of A_tqr and row-wise un-vectorize the result into the
//      6M x N matrix (A_t ⊙ Q_t) A_r^T, read as the (N, 6, M) tensor
//      sum_k a_r,k ∘ q_t,k ∘ a_t,k
//   4. inner CP of that tensor -> A_r, Q_t, A_t (columns share one ordering)
//   5. elevations from A_t and A_r by rotation invariance of the ULA,
//      transmit (φ, γ, η) from Q_t
//   6. pair receive tuples (outer ordering) with inner columns by elevation

#ifndef EMVS_NESTED_ESTIMATOR_HPP
#define EMVS_NESTED_ESTIMATOR_HPP

#include <span>
#include <string>
#include <vector>

#include "emvs/cp_als.hpp"
#include "emvs/radar_model.hpp"

namespace emvs
{

// ---- identifiability ------------------------------------------------------

struct IdentifiabilityBound
{
    std::string name; // e.g. "K <= M-1"
    Index lhs = 0;
    Index rhs = 0;
    bool holds = false;
};

struct Identifiability
{
    bool passes = false;
    std::vector<IdentifiabilityBound> bounds;

    /// Names of the violated bounds, comma separated; empty when passing.
    std::string violations() const;
};

/// Generic Kruskal conditions of the outer and inner decompositions (k-rank
/// taken as min(rows, K) per factor) and K <= min(M-1, N-1) for the
/// rotation-invariance step.
Identifiability check_identifiability(Index M, Index N, Index K, Index L);

// ---- decomposition stages -------------------------------------------------

struct OuterFactors
{
    ComplexMatrix a_tqr; // 6MN x K
    ComplexMatrix q_r;   // 6 x K
    ComplexMatrix s;     // K x L
    AlsReport report;
};

struct InnerFactors
{
    ComplexMatrix a_r; // N x K
    ComplexMatrix q_t; // 6 x K
    ComplexMatrix a_t; // M x K
    AlsReport report;
};

OuterFactors outer_decompose(const SnapshotData &data, Index K, const AlsOptions &opts);

/// ivec_row(sum_k A_tqr[:,k], 6M, N) = (A_t ⊙ Q_t) A_r^T.
ComplexMatrix rearranged_matrix(const ComplexMatrix &a_tqr, Index M, Index N);

/// Y1[n, p, m] = rearranged_matrix(...)[(m-1)*6 + p, n], dims (N, 6, M).
ComplexTensor3 rearrange_to_inner(const ComplexMatrix &a_tqr, Index M, Index N);

InnerFactors inner_decompose(const ComplexTensor3 &y1, Index K, const AlsOptions &opts);

// ---- parameter extraction -------------------------------------------------

struct ElevationEstimate
{
    std::vector<double> theta;       // radians in [0, π/2], A_hat column order
    std::vector<cdouble> eigenvalue; // rotation eigenvalue used for each column
    bool clamped = false;            // some phase fell outside [-π, 0]
};

/// Φ = pinv(J1 A) (J2 A) with J1/J2 dropping the last/first row; θ_k =
/// arcsin(-arg(λ_k)/π). Eigenpairs are matched to A's columns by maximal
/// eigenvector weight.
ElevationEstimate elevation_from_steering(const ComplexMatrix &a_hat);

struct Direction
{
    double theta = 0.0; // [0, π/2]
    double phi = 0.0;   // [0, 2π)
    Eigen::Vector3d poynting = Eigen::Vector3d::Zero();
    bool degenerate_azimuth = false; // u = v = 0, φ reported as 0
};

/// Normalized Poynting vector Re[(e/|e|) x (h*/|h|)] = [u, v, w];
/// θ = arcsin(min(1, sqrt(u²+v²))), φ = atan2(v, u).
Direction direction_from_response(const ComplexVector &q_hat);

struct Polarization
{
    double gamma = 0.0; // [0, π/2]
    double eta = 0.0;   // [-π, π)
    bool at_limit = false;       // |g2| ~ 0: γ reported as π/2
    bool phase_unobservable = false; // |g1| ~ 0: η reported as 0
};

/// g = pinv(F(θ,φ)) q; γ = arctan|g1/g2|, η = arg(g1/g2).
Polarization polarization_from_response(const ComplexVector &q_hat, double theta, double phi);

struct ReceiveTuple
{
    double theta = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
};

ReceiveTuple response_parameters(const ComplexVector &q_hat);

// ---- pairing --------------------------------------------------------------

enum class PairingRule
{
    optimal, // one-to-one, minimum total |θ_outer - θ_inner|
    greedy   // per outer column argmin over inner columns; may reuse an index
};

struct PairedReceive
{
    Index inner = 0;
    Index outer = 0;
    ReceiveTuple rx; // θ from the inner stage, (φ, γ, η) from the outer stage
};

struct Pairing
{
    std::vector<PairedReceive> pairs; // optimal: inner order; greedy: outer order
    bool one_to_one = true;

    /// outer column i -> inner column
    std::vector<Index> outer_to_inner() const;
};

Pairing pair_parameters(std::span<const double> theta_inner, std::span<const ReceiveTuple> rx_outer,
                        PairingRule rule = PairingRule::optimal);

// ---- end-to-end -----------------------------------------------------------

struct TargetEstimate
{
    TargetParams params;
    Index pairing_index = 0; // outer column supplying (φ_r, γ_r, η_r)
    cdouble tx_eigenvalue;
    cdouble rx_eigenvalue;
    Eigen::Vector3d tx_poynting = Eigen::Vector3d::Zero();
    Eigen::Vector3d rx_poynting = Eigen::Vector3d::Zero();
    std::vector<std::string> warnings;
};

struct EstimationReport
{
    std::vector<TargetEstimate> targets;
    std::vector<AlsReport> als; // outer then inner (nested) or the single run (baseline)
};

EstimationReport estimate_nested(const SnapshotData &data, Index K, const AlsOptions &opts,
                                 PairingRule rule = PairingRule::optimal);

struct RankOneSplit
{
    ComplexVector left;  // rows
    ComplexVector right; // cols
    double second_to_first = 0.0; // σ2/σ1 of the reshaped matrix
};

/// Dominant singular pair of ivec_row(v, rows, cols): v ≈ kron(left, right).
RankOneSplit split_rank_one(const ComplexVector &v, Index rows, Index cols);

/// Single-stage PARAFAC of the (6M, 6N, L) reshaped tensor with factors
/// (A_t ⊙ Q_t, A_r ⊙ Q_r, S^T), followed by a rank-1 split of every composite
/// column into steering vector and spatial response.
EstimationReport estimate_baseline_parafac(const SnapshotData &data, Index K, const AlsOptions &opts);

/// The (6M, 6N, L) tensor used by the baseline.
ComplexTensor3 baseline_tensor(const SnapshotData &data);

/// sweeps * (6MN + M + N + L + 12) * K^2.
double complexity_estimate(Index M, Index N, Index L, Index K, Index sweeps);

} // namespace emvs

#endif
