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

// Forward model of a bistatic MIMO radar with M transmit and N receive
// six-component electromagnetic vector sensors (EMVS).
//
// Per target k the virtual-array response is a_t ⊗ q_t ⊗ a_r ⊗ q_r with
//   a(θ)[m]      = exp(-jπ m sin θ),  m = 1..M (or N)
//   q(θ,φ,γ,η)   = F(θ,φ) g(γ,η)
// The snapshot tensor has dims (6MN, 6, L) and equals
//   cp_reconstruct(A_tqr, Q_r, S^T),   A_tqr = (A_t ⊙ Q_t) ⊙ A_r,
// so row r = ((m-1)*6 + (p_t-1))*N + n of mode 1 addresses transmit element
// m, transmit EMVS component p_t and receive element n (1-based).

#ifndef EMVS_RADAR_MODEL_HPP
#define EMVS_RADAR_MODEL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "emvs/tensor.hpp"

namespace emvs
{

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

/// Eight angle/polarization parameters of one target, radians.
struct TargetParams
{
    double theta_t = 0.0; // elevation, [0, π)
    double phi_t = 0.0;   // azimuth, [0, 2π)
    double gamma_t = 0.0; // polarization angle, [0, π/2)
    double eta_t = 0.0;   // polarization phase difference, [-π, π)
    double theta_r = 0.0;
    double phi_r = 0.0;
    double gamma_r = 0.0;
    double eta_r = 0.0;

    std::array<double, 8> as_array() const
    {
        return {theta_t, phi_t, gamma_t, eta_t, theta_r, phi_r, gamma_r, eta_r};
    }
    static TargetParams from_array(const std::array<double, 8> &a)
    {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
    }
};

/// Parameter names in as_array() order.
inline constexpr std::array<const char *, 8> param_names = {
    "theta_t", "phi_t", "gamma_t", "eta_t", "theta_r", "phi_r", "gamma_r", "eta_r"};

struct Scene
{
    std::vector<TargetParams> targets;
    Index M = 2; // transmit EMVS count
    Index N = 2; // receive EMVS count
    Index L = 1; // snapshots

    Index K() const { return static_cast<Index>(targets.size()); }

    /// Throws ErrorCode::argument on K < 1, M < 2, N < 2, L < 1, out-of-domain
    /// parameters or repeated (theta_t, theta_r) pairs. L < K is not an error here.
    void validate() const;
};

/// The three-target, M=9 / N=10 / L=200 scene of the reference experiment.
Scene reference_scene();

/// Half-wavelength ULA steering vector, element m = exp(-jπ m sin θ), m = 1..count.
ComplexVector ula_steering(double theta, Index count);

/// 6x2 matrix mapping the polarization state to the EMVS field components
/// (rows: e_x, e_y, e_z, h_x, h_y, h_z).
Eigen::Matrix<double, 6, 2> spatial_angular_matrix(double theta, double phi);

/// g = [sin γ e^{jη}, cos γ]^T.
Eigen::Vector2cd polarization_vector(double gamma, double eta);

/// q = F(θ,φ) g(γ,η). Its electric and magnetic halves are unit vectors, so ‖q‖ = sqrt(2).
ComplexVector emvs_response(double theta, double phi, double gamma, double eta);

struct ArrayFactors
{
    ComplexMatrix a_t; // M x K
    ComplexMatrix q_t; // 6 x K
    ComplexMatrix a_r; // N x K
    ComplexMatrix q_r; // 6 x K

    /// (A_t ⊙ Q_t) ⊙ A_r, 6MN x K.
    ComplexMatrix a_tqr() const { return khatri_rao(khatri_rao(a_t, q_t), a_r); }
};

ArrayFactors build_factors(const Scene &scene);

/// Deterministic sub-seed: splitmix64 folded over (master, path...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// K x L source matrix generator; the default draws i.i.d. unit-variance
/// circular complex Gaussians.
using SourceGenerator = std::function<ComplexMatrix(Index K, Index L, std::mt19937_64 &rng)>;

ComplexMatrix gaussian_sources(Index K, Index L, std::mt19937_64 &rng);

struct SnapshotData
{
    ComplexTensor3 tensor;        // (6MN, 6, L)
    std::optional<double> snr_db; // nullopt: noiseless
    Index M = 2;
    Index N = 2;
    ComplexMatrix source;              // K x L ground-truth S; empty when loaded from disk
    std::vector<std::string> warnings; // non-fatal findings (e.g. L < K)

    Index L() const { return tensor.dims().i3; }

    /// Wraps a bare (6MN, 6, L) tensor, e.g. one read from a dataset file.
    static SnapshotData from_tensor(ComplexTensor3 tensor, Index M, Index N);
};

/// Draws S from `seed`, forms cp_reconstruct(A_tqr, Q_r, S^T) and, when
/// `snr_db` is set, adds circular Gaussian noise with per-entry variance
/// P_sig / 10^(snr_db/10), P_sig being the mean |entry|^2 of the clean tensor.
SnapshotData synthesize(const Scene &scene, std::optional<double> snr_db, std::uint64_t seed,
                        const SourceGenerator &sources = {});

/// Matrix form Y (36MN x L) of a snapshot tensor: Y[r*6 + p, l] = T[r, p, l],
/// which equals (A_tqr ⊙ Q_r) S for noiseless data.
ComplexMatrix snapshot_matrix(const ComplexTensor3 &tensor);

} // namespace emvs

#endif
