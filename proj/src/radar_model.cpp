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

#include "emvs/radar_model.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace emvs
{

namespace
{

void require_in(double value, double lo, double hi, const char *name, std::size_t k)
{
    if (!std::isfinite(value) || value < lo || value >= hi)
        fail(ErrorCode::argument, std::string("target ") + std::to_string(k + 1) + ": " + name +
                                      " = " + std::to_string(value) + " rad outside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

void Scene::validate() const
{
    if (targets.empty())
        fail(ErrorCode::argument, "scene needs at least one target");
    if (M < 2 || N < 2)
        fail(ErrorCode::argument, "scene needs M >= 2 and N >= 2");
    if (L < 1)
        fail(ErrorCode::argument, "scene needs L >= 1");

    std::set<std::pair<double, double>> elevations;
    for (std::size_t k = 0; k < targets.size(); ++k)
    {
        const TargetParams &t = targets[k];
        require_in(t.theta_t, 0.0, pi, "theta_t", k);
        require_in(t.phi_t, 0.0, 2.0 * pi, "phi_t", k);
        require_in(t.gamma_t, 0.0, pi / 2.0, "gamma_t", k);
        require_in(t.eta_t, -pi, pi, "eta_t", k);
        require_in(t.theta_r, 0.0, pi, "theta_r", k);
        require_in(t.phi_r, 0.0, 2.0 * pi, "phi_r", k);
        require_in(t.gamma_r, 0.0, pi / 2.0, "gamma_r", k);
        require_in(t.eta_r, -pi, pi, "eta_r", k);
        if (!elevations.emplace(t.theta_t, t.theta_r).second)
            fail(ErrorCode::argument, "targets share the same (theta_t, theta_r) pair");
    }
}

Scene reference_scene()
{
    const double theta_t[] = {40, 20, 30}, phi_t[] = {15, 25, 35};
    const double gamma_t[] = {10, 22, 35}, eta_t[] = {38, 48, 56};
    const double theta_r[] = {24, 38, 16}, phi_r[] = {21, 32, 55};
    const double gamma_r[] = {42, 33, 60}, eta_r[] = {17, 27, 39};

    Scene scene;
    scene.M = 9;
    scene.N = 10;
    scene.L = 200;
    for (int k = 0; k < 3; ++k)
        scene.targets.push_back({deg2rad(theta_t[k]), deg2rad(phi_t[k]), deg2rad(gamma_t[k]),
                                 deg2rad(eta_t[k]), deg2rad(theta_r[k]), deg2rad(phi_r[k]),
                                 deg2rad(gamma_r[k]), deg2rad(eta_r[k])});
    return scene;
}

ComplexVector ula_steering(double theta, Index count)
{
    if (count < 1)
        fail(ErrorCode::argument, "ula_steering: count must be >= 1");
    if (!std::isfinite(theta))
        fail(ErrorCode::numerical, "ula_steering: non-finite angle");
    ComplexVector a(count);
    const double s = std::sin(theta);
    for (Index m = 0; m < count; ++m)
        a(m) = std::polar(1.0, -pi * static_cast<double>(m + 1) * s);
    return a;
}

Eigen::Matrix<double, 6, 2> spatial_angular_matrix(double theta, double phi)
{
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    Eigen::Matrix<double, 6, 2> f;
    f << cp * ct, -sp,
         sp * ct, cp,
         -st, 0.0,
         -sp, -cp * ct,
         cp, -sp * ct,
         0.0, st;
    return f;
}

Eigen::Vector2cd polarization_vector(double gamma, double eta)
{
    return {std::polar(std::sin(gamma), eta), cdouble(std::cos(gamma), 0.0)};
}

ComplexVector emvs_response(double theta, double phi, double gamma, double eta)
{
    return spatial_angular_matrix(theta, phi).cast<cdouble>() * polarization_vector(gamma, eta);
}

ArrayFactors build_factors(const Scene &scene)
{
    scene.validate();
    const Index K = scene.K();
    ArrayFactors f{ComplexMatrix(scene.M, K), ComplexMatrix(6, K), ComplexMatrix(scene.N, K),
                   ComplexMatrix(6, K)};
    for (Index k = 0; k < K; ++k)
    {
        const TargetParams &t = scene.targets[static_cast<std::size_t>(k)];
        f.a_t.col(k) = ula_steering(t.theta_t, scene.M);
        f.q_t.col(k) = emvs_response(t.theta_t, t.phi_t, t.gamma_t, t.eta_t);
        f.a_r.col(k) = ula_steering(t.theta_r, scene.N);
        f.q_r.col(k) = emvs_response(t.theta_r, t.phi_r, t.gamma_r, t.eta_r);
    }
    return f;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t c : path)
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

ComplexMatrix gaussian_sources(Index K, Index L, std::mt19937_64 &rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix s(K, L);
    for (Index l = 0; l < L; ++l)
        for (Index k = 0; k < K; ++k)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            s(k, l) = {re, im};
        }
    return s;
}

SnapshotData SnapshotData::from_tensor(ComplexTensor3 tensor, Index M, Index N)
{
    if (M < 2 || N < 2)
        fail(ErrorCode::argument, "snapshot data needs M >= 2 and N >= 2");
    const Dims3 &d = tensor.dims();
    if (d.i1 != 6 * M * N || d.i2 != 6)
        fail(ErrorCode::dimension, "snapshot tensor dims (" + std::to_string(d.i1) + ", " +
                                       std::to_string(d.i2) + ", " + std::to_string(d.i3) +
                                       ") are not (6MN, 6, L) for M=" + std::to_string(M) +
                                       ", N=" + std::to_string(N));
    return SnapshotData{std::move(tensor), std::nullopt, M, N, ComplexMatrix(), {}};
}

SnapshotData synthesize(const Scene &scene, std::optional<double> snr_db, std::uint64_t seed,
                        const SourceGenerator &sources)
{
    const ArrayFactors f = build_factors(scene);
    const Index K = scene.K();

    std::mt19937_64 source_rng(derive_seed(seed, {0}));
    ComplexMatrix s = sources ? sources(K, scene.L, source_rng) : gaussian_sources(K, scene.L, source_rng);
    if (s.rows() != K || s.cols() != scene.L)
        fail(ErrorCode::dimension, "source generator returned the wrong shape");
    require_finite(s, "source matrix");

    ComplexTensor3 tensor = cp_reconstruct(f.a_tqr(), f.q_r, s.transpose());

    std::vector<std::string> warnings;
    if (scene.L < K)
        warnings.push_back("L = " + std::to_string(scene.L) + " < K = " + std::to_string(K) +
                           ": source matrix cannot have full row rank");

    if (snr_db)
    {
        if (!std::isfinite(*snr_db))
            fail(ErrorCode::argument, "snr_db must be finite");
        const double total = tensor.frobenius_norm();
        const double p_sig = total * total / static_cast<double>(tensor.dims().size());
        const double sigma = std::sqrt(p_sig / std::pow(10.0, *snr_db / 10.0) / 2.0);
        std::mt19937_64 noise_rng(derive_seed(seed, {1}));
        std::normal_distribution<double> normal(0.0, sigma);
        for (cdouble &z : tensor.data())
        {
            const double re = normal(noise_rng);
            const double im = normal(noise_rng);
            z += cdouble(re, im);
        }
    }
    return SnapshotData{std::move(tensor), snr_db, scene.M, scene.N, std::move(s), std::move(warnings)};
}

ComplexMatrix snapshot_matrix(const ComplexTensor3 &tensor)
{
    const Dims3 &d = tensor.dims();
    ComplexMatrix y(d.i1 * d.i2, d.i3);
    for (Index l = 0; l < d.i3; ++l)
        for (Index r = 0; r < d.i1; ++r)
            for (Index p = 0; p < d.i2; ++p)
                y(r * d.i2 + p, l) = tensor(r, p, l);
    return y;
}

} // namespace emvs
