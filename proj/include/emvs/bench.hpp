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

// Monte-Carlo RMSE-versus-SNR harness.
//
// Per (SNR index s, trial t) the snapshot tensor is synthesized from
// derive_seed(master_seed, {s, t}) and every configured method is run on the
// same data. Estimates are matched to the true targets by minimum total
// squared error before scoring. RMSE per parameter group is
//   sqrt( 1/(T K) * sum_trials sum_targets sum_{params in group} err^2 )
// with azimuth and phase-difference errors taken on the circle.

#ifndef EMVS_BENCH_HPP
#define EMVS_BENCH_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emvs/nested_estimator.hpp"

namespace emvs
{

enum class Method
{
    nested,
    baseline
};

enum class ParamGroup
{
    angle,       // θ_t, φ_t, θ_r, φ_r
    polarization // γ_t, η_t, γ_r, η_r
};

const char *to_string(Method m);
const char *to_string(ParamGroup g);
Method parse_method(std::string_view name);

/// Parameters (as_array() index) belonging to a group.
std::array<int, 4> group_members(ParamGroup g);

/// True for the azimuth and phase-difference slots of as_array().
inline constexpr std::array<bool, 8> circular_params = {false, true, false, true,
                                                        false, true, false, true};

struct BenchConfig
{
    Scene scene;
    std::vector<double> snr_grid_db;
    bool noiseless = false; // synthesize every grid point without noise
    int trials = 100;
    std::vector<Method> methods{Method::nested, Method::baseline};
    std::uint64_t master_seed = 0;
    AlsOptions als;
    unsigned threads = 0; // 0: hardware concurrency

    void validate() const;
};

/// JSON document: {M, N, L, K, targets: [{theta_t_deg, ...}], snr_grid_db,
/// trials, methods, master_seed, als: {max_iters, rel_tol, restarts}} plus the
/// optional keys noiseless, threads and als.seed. Keys starting with '_' are
/// comments. Throws ErrorCode::config.
BenchConfig parse_bench_config(std::string_view json_text);
BenchConfig load_bench_config(const std::string &path);
/// Scene part only; bench keys are accepted and ignored.
Scene parse_scene(std::string_view json_text);
std::string bench_config_to_json(const BenchConfig &cfg);

using ParamVector = std::vector<double>;

/// sqrt( 1/(T K) * sum ||est - truth||^2 ) over T trials of K targets each.
/// `circular[i]` selects shortest-arc differences for component i.
double rmse(const std::vector<std::vector<ParamVector>> &estimates,
            const std::vector<std::vector<ParamVector>> &truth, std::span<const bool> circular = {});

/// Difference on the circle, in [-π, π).
double circular_difference(double a, double b);

/// Reorders estimates onto the truth ordering (minimum total squared error).
std::vector<TargetParams> match_to_truth(const std::vector<TargetEstimate> &estimates,
                                         const std::vector<TargetParams> &truth);

struct BenchRow
{
    double snr_db = 0.0;
    Method method = Method::nested;
    ParamGroup group = ParamGroup::angle;
    double rmse = 0.0; // radians
    int trials_used = 0;
    double wall_time_s = 0.0;
};

struct ParamRow
{
    double snr_db = 0.0;
    Method method = Method::nested;
    std::array<double, 8> rmse{}; // as_array() order
    int trials_used = 0;
};

struct FailedTrial
{
    double snr_db = 0.0;
    Method method = Method::nested;
    int trial = 0;
    std::string reason;
};

struct BenchResult
{
    std::vector<BenchRow> rows;      // snr-major, then method, then group
    std::vector<ParamRow> per_param; // snr-major, then method
    std::vector<FailedTrial> failures;
    double wall_time_s = 0.0;
};

/// Throws ErrorCode::numerical naming the point when more than 20% of the
/// trials at any (SNR, method) fail.
BenchResult run_sweep(const BenchConfig &cfg);

/// `snr_db,method,param_group,rmse_rad,trials_used,wall_time_s`. Wall time is
/// written as 0 unless `with_wall_time`, so identical configs give identical bytes.
std::string results_csv(const BenchResult &result, bool with_wall_time = false);
std::string per_param_csv(const BenchResult &result);

/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const BenchConfig &cfg);
std::string manifest_json(const BenchConfig &cfg, const BenchResult &result);

} // namespace emvs

#endif
