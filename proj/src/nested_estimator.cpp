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

#include "emvs/nested_estimator.hpp"

#include <algorithm>
#include <string>

namespace emvs
{

namespace
{

template <typename F>
auto staged(const char *stage, F &&body)
{
    try
    {
        return body();
    }
    catch (const Error &e)
    {
        throw Error(e.code(), e.what(), stage);
    }
}

void require_rank(Index K)
{
    if (K < 1)
        fail(ErrorCode::argument, "number of targets K must be >= 1");
}

AlsOptions stage_options(const AlsOptions &opts, Index K, std::uint64_t stage)
{
    AlsOptions o = opts;
    o.rank = K;
    o.seed = derive_seed(opts.seed, {stage});
    return o;
}

void require_identifiable(Index M, Index N, Index K, Index L)
{
    const Identifiability id = check_identifiability(M, N, K, L);
    if (!id.passes)
        fail(ErrorCode::identifiability, "K=" + std::to_string(K) + " not identifiable for M=" +
                                             std::to_string(M) + ", N=" + std::to_string(N) +
                                             ", L=" + std::to_string(L) + ": violates " + id.violations());
}

} // namespace

std::string Identifiability::violations() const
{
    std::string out;
    for (const IdentifiabilityBound &b : bounds)
        if (!b.holds)
            out += (out.empty() ? "" : ", ") + b.name;
    return out;
}

Identifiability check_identifiability(Index M, Index N, Index K, Index L)
{
    const auto kr = [K](Index rows) { return std::min(rows, K); };
    Identifiability id;
    id.bounds = {
        {"K >= 1", K, 1, K >= 1},
        {"2K+2 <= k(A_tqr)+k(Q_r)+k(S)", 2 * K + 2, kr(6 * M * N) + kr(6) + kr(L), false},
        {"2K+2 <= k(A_t)+k(Q_t)+k(A_r)", 2 * K + 2, kr(M) + kr(6) + kr(N), false},
        {"K <= M-1", K, M - 1, K <= M - 1},
        {"K <= N-1", K, N - 1, K <= N - 1},
    };
    // Rank-1 decompositions are unique up to scale, so the Kruskal rows only bind for K >= 2.
    id.bounds[1].holds = K == 1 || id.bounds[1].lhs <= id.bounds[1].rhs;
    id.bounds[2].holds = K == 1 || id.bounds[2].lhs <= id.bounds[2].rhs;
    id.passes = std::all_of(id.bounds.begin(), id.bounds.end(),
                            [](const IdentifiabilityBound &b) { return b.holds; });
    return id;
}

OuterFactors outer_decompose(const SnapshotData &data, Index K, const AlsOptions &opts)
{
    require_rank(K);
    require_identifiable(data.M, data.N, K, data.L());
    const Dims3 &d = data.tensor.dims();
    if (d.i1 != 6 * data.M * data.N || d.i2 != 6)
        fail(ErrorCode::dimension, "snapshot tensor is not (6MN, 6, L)");

    CpResult cp = cp_als(data.tensor, stage_options(opts, K, 1));
    return {std::move(cp.factors.f1), std::move(cp.factors.f2), cp.factors.f3.transpose(),
            std::move(cp.report)};
}

ComplexMatrix rearranged_matrix(const ComplexMatrix &a_tqr, Index M, Index N)
{
    if (M < 1 || N < 1 || a_tqr.rows() != 6 * M * N)
        fail(ErrorCode::dimension, "rearrange: A_tqr has " + std::to_string(a_tqr.rows()) +
                                       " rows, expected 6*M*N = " + std::to_string(6 * M * N));
    const ComplexVector summed = a_tqr.rowwise().sum();
    return ivec_row(summed, 6 * M, N);
}

ComplexTensor3 rearrange_to_inner(const ComplexMatrix &a_tqr, Index M, Index N)
{
    // unfold_1 of the (N, 6, M) tensor is the transpose of the 6M x N matrix.
    return fold(rearranged_matrix(a_tqr, M, N).transpose(), 1, Dims3{N, 6, M});
}

InnerFactors inner_decompose(const ComplexTensor3 &y1, Index K, const AlsOptions &opts)
{
    require_rank(K);
    const Dims3 &d = y1.dims();
    if (d.i2 != 6)
        fail(ErrorCode::dimension, "inner tensor must be (N, 6, M)");
    const Index N = d.i1, M = d.i3;
    const Identifiability id = check_identifiability(M, N, K, K);
    for (const IdentifiabilityBound &b : id.bounds)
        if (!b.holds && b.name.find("A_tqr") == std::string::npos)
            fail(ErrorCode::identifiability, "inner decomposition with K=" + std::to_string(K) +
                                                 " violates " + b.name);

    CpResult cp = cp_als(y1, stage_options(opts, K, 2));
    return {std::move(cp.factors.f1), std::move(cp.factors.f2), std::move(cp.factors.f3),
            std::move(cp.report)};
}

EstimationReport estimate_nested(const SnapshotData &data, Index K, const AlsOptions &opts,
                                 PairingRule rule)
{
    require_rank(K);
    require_identifiable(data.M, data.N, K, data.L());

    const OuterFactors outer = staged("outer", [&] { return outer_decompose(data, K, opts); });

    std::vector<ReceiveTuple> rx(static_cast<std::size_t>(K));
    std::vector<Eigen::Vector3d> rx_poynting(static_cast<std::size_t>(K));
    staged("receive extraction", [&] {
        for (Index k = 0; k < K; ++k)
        {
            const Direction dir = direction_from_response(outer.q_r.col(k));
            const Polarization pol = polarization_from_response(outer.q_r.col(k), dir.theta, dir.phi);
            rx[static_cast<std::size_t>(k)] = {dir.theta, dir.phi, pol.gamma, pol.eta};
            rx_poynting[static_cast<std::size_t>(k)] = dir.poynting;
        }
        return 0;
    });

    const ComplexTensor3 y1 =
        staged("rearrange", [&] { return rearrange_to_inner(outer.a_tqr, data.M, data.N); });
    const InnerFactors inner = staged("inner", [&] { return inner_decompose(y1, K, opts); });

    const ElevationEstimate tx_elev =
        staged("transmit extraction", [&] { return elevation_from_steering(inner.a_t); });
    const ElevationEstimate rx_elev =
        staged("receive elevation", [&] { return elevation_from_steering(inner.a_r); });
    const Pairing pairing =
        staged("pairing", [&] { return pair_parameters(rx_elev.theta, rx, rule); });

    EstimationReport report;
    report.als = {outer.report, inner.report};
    for (const PairedReceive &pair : pairing.pairs)
    {
        const Index j = pair.inner;
        TargetEstimate est;
        staged("transmit extraction", [&] {
            const Direction dir = direction_from_response(inner.q_t.col(j));
            const Polarization pol = polarization_from_response(inner.q_t.col(j), dir.theta, dir.phi);
            est.params.theta_t = tx_elev.theta[static_cast<std::size_t>(j)];
            est.params.phi_t = dir.phi;
            est.params.gamma_t = pol.gamma;
            est.params.eta_t = pol.eta;
            est.tx_poynting = dir.poynting;
            if (dir.degenerate_azimuth)
                est.warnings.push_back("transmit azimuth degenerate at zenith");
            if (pol.at_limit)
                est.warnings.push_back("transmit polarization angle at pi/2 limit");
            return 0;
        });
        est.tx_eigenvalue = tx_elev.eigenvalue[static_cast<std::size_t>(j)];
        est.rx_eigenvalue = rx_elev.eigenvalue[static_cast<std::size_t>(j)];
        est.params.theta_r = pair.rx.theta;
        est.params.phi_r = pair.rx.phi;
        est.params.gamma_r = pair.rx.gamma;
        est.params.eta_r = pair.rx.eta;
        est.pairing_index = pair.outer;
        est.rx_poynting = rx_poynting[static_cast<std::size_t>(pair.outer)];
        if (tx_elev.clamped || rx_elev.clamped)
            est.warnings.push_back("rotation eigenvalue phase clamped");
        if (!pairing.one_to_one)
            est.warnings.push_back("greedy pairing reused an inner column");
        report.targets.push_back(std::move(est));
    }
    return report;
}

ComplexTensor3 baseline_tensor(const SnapshotData &data)
{
    const Index M = data.M, N = data.N, L = data.L();
    if (data.tensor.dims().i1 != 6 * M * N || data.tensor.dims().i2 != 6)
        fail(ErrorCode::dimension, "snapshot tensor is not (6MN, 6, L)");
    ComplexTensor3 b(Dims3{6 * M, 6 * N, L});
    for (Index l = 0; l < L; ++l)
        for (Index row_t = 0; row_t < 6 * M; ++row_t)
            for (Index n = 0; n < N; ++n)
                for (Index p = 0; p < 6; ++p)
                    b(row_t, n * 6 + p, l) = data.tensor(row_t * N + n, p, l);
    return b;
}

EstimationReport estimate_baseline_parafac(const SnapshotData &data, Index K, const AlsOptions &opts)
{
    require_rank(K);
    require_identifiable(data.M, data.N, K, data.L());
    const Index M = data.M, N = data.N;

    const CpResult cp = staged("baseline", [&] {
        return cp_als(baseline_tensor(data), stage_options(opts, K, 3));
    });

    ComplexMatrix a_t(M, K), q_t(6, K), a_r(N, K), q_r(6, K);
    staged("reconstruction", [&] {
        for (Index k = 0; k < K; ++k)
        {
            const RankOneSplit tx = split_rank_one(cp.factors.f1.col(k), M, 6);
            const RankOneSplit rx = split_rank_one(cp.factors.f2.col(k), N, 6);
            a_t.col(k) = tx.left;
            q_t.col(k) = tx.right;
            a_r.col(k) = rx.left;
            q_r.col(k) = rx.right;
        }
        return 0;
    });

    const ElevationEstimate tx_elev =
        staged("transmit extraction", [&] { return elevation_from_steering(a_t); });
    const ElevationEstimate rx_elev =
        staged("receive elevation", [&] { return elevation_from_steering(a_r); });

    EstimationReport report;
    report.als = {cp.report};
    for (Index k = 0; k < K; ++k)
    {
        TargetEstimate est;
        staged("response extraction", [&] {
            const Direction td = direction_from_response(q_t.col(k));
            const Polarization tp = polarization_from_response(q_t.col(k), td.theta, td.phi);
            const Direction rd = direction_from_response(q_r.col(k));
            const Polarization rp = polarization_from_response(q_r.col(k), rd.theta, rd.phi);
            est.params = {tx_elev.theta[static_cast<std::size_t>(k)], td.phi, tp.gamma, tp.eta,
                          rx_elev.theta[static_cast<std::size_t>(k)], rd.phi, rp.gamma, rp.eta};
            est.tx_poynting = td.poynting;
            est.rx_poynting = rd.poynting;
            return 0;
        });
        est.pairing_index = k;
        est.tx_eigenvalue = tx_elev.eigenvalue[static_cast<std::size_t>(k)];
        est.rx_eigenvalue = rx_elev.eigenvalue[static_cast<std::size_t>(k)];
        if (tx_elev.clamped || rx_elev.clamped)
            est.warnings.push_back("rotation eigenvalue phase clamped");
        report.targets.push_back(std::move(est));
    }
    return report;
}

double complexity_estimate(Index M, Index N, Index L, Index K, Index sweeps)
{
    return static_cast<double>(sweeps) * static_cast<double>(6 * M * N + M + N + L + 12) *
           static_cast<double>(K * K);
}

} // namespace emvs
