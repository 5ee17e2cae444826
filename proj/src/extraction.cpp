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

#include <algorithm>
#include <cmath>
#include <string>

#include "emvs/assignment.hpp"
#include "emvs/nested_estimator.hpp"

namespace emvs
{

namespace
{

double wrap_two_pi(double angle)
{
    double w = std::fmod(angle, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    return w >= 2.0 * pi ? 0.0 : w;
}

double wrap_pi(double angle)
{
    double w = wrap_two_pi(angle + pi) - pi;
    return w >= pi ? -pi : w;
}

} // namespace

ElevationEstimate elevation_from_steering(const ComplexMatrix &a_hat)
{
    const Index P = a_hat.rows();
    const Index K = a_hat.cols();
    if (P < 2)
        fail(ErrorCode::dimension, "elevation_from_steering: need at least 2 array elements");
    if (K < 1 || K > P - 1)
        fail(ErrorCode::dimension, "elevation_from_steering: need 1 <= K <= P-1 (K=" +
                                       std::to_string(K) + ", P=" + std::to_string(P) + ")");
    require_finite(a_hat, "steering estimate");

    const ComplexMatrix upper = a_hat.topRows(P - 1);  // J1 A
    const ComplexMatrix lower = a_hat.bottomRows(P - 1); // J2 A

    Eigen::JacobiSVD<ComplexMatrix> svd(upper, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(K - 1) < 1e-12 * sv(0))
        fail(ErrorCode::degenerate, "elevation_from_steering: J1*A is rank deficient");
    const ComplexMatrix rotation = svd.solve(lower);

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(rotation);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::numerical, "elevation_from_steering: eigen-decomposition failed");

    // Columns of A are (scaled) eigenvectors of Φ's similarity class, so Φ is
    // near-diagonal and eigenvector i peaks at the coordinate of its column.
    const ComplexMatrix &v = eig.eigenvectors();
    Eigen::MatrixXd cost(K, K); // row: A column, col: eigenpair
    for (Index i = 0; i < K; ++i)
    {
        const double norm = v.col(i).norm();
        for (Index j = 0; j < K; ++j)
            cost(j, i) = -(norm > 0.0 ? std::abs(v(j, i)) / norm : 0.0);
    }
    const std::vector<Index> column_to_pair = solve_assignment(cost);

    ElevationEstimate out;
    for (Index j = 0; j < K; ++j)
    {
        const cdouble lambda = eig.eigenvalues()(column_to_pair[static_cast<std::size_t>(j)]);
        const double phase = std::arg(lambda);
        double s = -phase / pi;
        if (phase > pi / 2.0)
            s = 2.0 - phase / pi; // wrapped past -π
        if (s < 0.0 || s > 1.0)
        {
            out.clamped = true;
            s = std::clamp(s, 0.0, 1.0);
        }
        out.theta.push_back(std::asin(s));
        out.eigenvalue.push_back(lambda);
    }
    return out;
}

Direction direction_from_response(const ComplexVector &q_hat)
{
    if (q_hat.size() != 6)
        fail(ErrorCode::dimension, "direction_from_response: expected a 6-component response");
    require_finite(q_hat, "spatial response");
    const Eigen::Vector3cd e = q_hat.head<3>();
    const Eigen::Vector3cd h = q_hat.tail<3>();
    const double scale = q_hat.norm();
    const double ne = e.norm(), nh = h.norm();
    if (scale == 0.0 || ne <= 1e-9 * scale || nh <= 1e-9 * scale)
        fail(ErrorCode::degenerate, "direction_from_response: electric or magnetic part is ~0");

    const Eigen::Vector3cd p = (e / ne).cross(h.conjugate() / nh);
    Direction d;
    d.poynting = p.real();
    const double u = d.poynting.x(), v = d.poynting.y();
    const double rho = std::hypot(u, v);
    d.theta = std::asin(std::min(1.0, rho));
    if (rho < 1e-12)
    {
        d.degenerate_azimuth = true;
        d.phi = 0.0;
    }
    else
    {
        d.phi = wrap_two_pi(std::atan2(v, u));
    }
    return d;
}

Polarization polarization_from_response(const ComplexVector &q_hat, double theta, double phi)
{
    if (q_hat.size() != 6)
        fail(ErrorCode::dimension, "polarization_from_response: expected a 6-component response");
    require_finite(q_hat, "spatial response");
    const Eigen::Matrix<double, 6, 2> f = spatial_angular_matrix(theta, phi);
    // F has orthonormal columns for every (θ, φ); solve the normal equations anyway.
    const Eigen::Matrix2d normal = f.transpose() * f;
    const Eigen::Vector2cd g = normal.cast<cdouble>().ldlt().solve(f.transpose().cast<cdouble>() * q_hat);

    Polarization out;
    const double a1 = std::abs(g(0)), a2 = std::abs(g(1));
    const double scale = std::max(a1, a2);
    if (scale == 0.0)
        fail(ErrorCode::degenerate, "polarization_from_response: zero polarization state");
    if (a2 < 1e-12 * scale)
    {
        out.at_limit = true;
        out.gamma = pi / 2.0;
        out.eta = wrap_pi(std::arg(g(0)));
        return out;
    }
    const cdouble ratio = g(0) / g(1);
    out.gamma = std::atan(std::abs(ratio));
    if (a1 < 1e-12 * scale)
    {
        out.phase_unobservable = true;
        out.eta = 0.0;
    }
    else
    {
        out.eta = wrap_pi(std::arg(ratio));
    }
    return out;
}

ReceiveTuple response_parameters(const ComplexVector &q_hat)
{
    const Direction d = direction_from_response(q_hat);
    const Polarization p = polarization_from_response(q_hat, d.theta, d.phi);
    return {d.theta, d.phi, p.gamma, p.eta};
}

std::vector<Index> Pairing::outer_to_inner() const
{
    std::vector<Index> out(pairs.size(), -1);
    for (const PairedReceive &p : pairs)
        out[static_cast<std::size_t>(p.outer)] = p.inner;
    return out;
}

Pairing pair_parameters(std::span<const double> theta_inner, std::span<const ReceiveTuple> rx_outer,
                        PairingRule rule)
{
    if (theta_inner.size() != rx_outer.size())
        fail(ErrorCode::dimension, "pair_parameters: inner and outer lists differ in length");
    const auto K = static_cast<Index>(theta_inner.size());

    Pairing out;
    if (rule == PairingRule::greedy)
    {
        std::vector<bool> taken(static_cast<std::size_t>(K), false);
        for (Index i = 0; i < K; ++i)
        {
            Index best = 0;
            for (Index j = 1; j < K; ++j)
                if (std::abs(rx_outer[i].theta - theta_inner[j]) <
                    std::abs(rx_outer[i].theta - theta_inner[best]))
                    best = j;
            if (taken[static_cast<std::size_t>(best)])
                out.one_to_one = false;
            taken[static_cast<std::size_t>(best)] = true;
            ReceiveTuple rx = rx_outer[i];
            rx.theta = theta_inner[best];
            out.pairs.push_back({best, i, rx});
        }
        return out;
    }

    Eigen::MatrixXd cost(K, K); // row: outer, col: inner
    for (Index i = 0; i < K; ++i)
        for (Index j = 0; j < K; ++j)
            cost(i, j) = std::abs(rx_outer[i].theta - theta_inner[j]);
    const std::vector<Index> outer_to_inner = solve_assignment(cost);

    out.pairs.resize(static_cast<std::size_t>(K));
    for (Index i = 0; i < K; ++i)
    {
        const Index j = outer_to_inner[static_cast<std::size_t>(i)];
        ReceiveTuple rx = rx_outer[i];
        rx.theta = theta_inner[j];
        out.pairs[static_cast<std::size_t>(j)] = {j, i, rx};
    }
    return out;
}

RankOneSplit split_rank_one(const ComplexVector &v, Index rows, Index cols)
{
    const ComplexMatrix x = ivec_row(v, rows, cols);
    Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    if (sv(0) == 0.0)
        fail(ErrorCode::degenerate, "split_rank_one: zero matrix");
    RankOneSplit out;
    // x ≈ σ u v^H = left * right^T
    out.left = svd.matrixU().col(0);
    out.right = sv(0) * svd.matrixV().col(0).conjugate();
    out.second_to_first = sv.size() > 1 ? sv(1) / sv(0) : 0.0;
    return out;
}

} // namespace emvs
