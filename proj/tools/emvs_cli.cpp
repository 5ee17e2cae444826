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

// emvs command-line tool: simulate, estimate, bench.
//
// Exit codes: 0 success, 1 usage / input error, 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emvs/emvs.h"

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_numerical = 2;

const char *const param_keys[EMVS_PARAM_COUNT] = {"theta_t_deg", "phi_t_deg", "gamma_t_deg", "eta_t_deg",
                                                  "theta_r_deg", "phi_r_deg", "gamma_r_deg", "eta_r_deg"};

int report(emvs_status s)
{
    if (s == EMVS_OK)
        return exit_ok;
    std::cerr << "emvs: " << emvs_status_string(s) << ": " << emvs_last_error() << '\n';
    switch (s)
    {
    case EMVS_ERR_NUMERICAL:
    case EMVS_ERR_DEGENERATE:
    case EMVS_ERR_INTERNAL: return exit_numerical;
    default: return exit_usage;
    }
}

double deg(double rad) { return rad * 180.0 / 3.14159265358979323846; }

struct SimulateArgs
{
    std::string config;
    std::optional<double> snr;
    bool noiseless = false;
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate(const SimulateArgs &a)
{
    emvs_scene *scene = nullptr;
    if (int rc = report(emvs_scene_load(a.config.c_str(), &scene)))
        return rc;
    emvs_dataset *data = nullptr;
    emvs_status s = emvs_simulate(scene, a.noiseless ? 0 : 1, a.snr.value_or(0.0), a.seed, &data);
    if (s == EMVS_OK)
        s = emvs_dataset_save(data, a.out.c_str());
    emvs_dataset_free(data);
    emvs_scene_free(scene);
    return report(s);
}

struct EstimateArgs
{
    std::string data;
    int K = 0;
    int M = 0;
    int N = 0;
    std::string config;
    std::string method = "nested";
    std::string format = "text";
    emvs_als_options als{};
};

void print_estimates(const emvs_estimates *est, const EstimateArgs &a)
{
    const int K = emvs_estimates_count(est);
    const bool converged = emvs_estimates_converged(est) != 0;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(K), std::vector<double>(EMVS_PARAM_COUNT));
    for (int k = 0; k < K; ++k)
        emvs_estimates_get(est, k, rows[static_cast<std::size_t>(k)].data());

    if (a.format == "json")
    {
        std::printf("{\n  \"method\": \"%s\",\n  \"converged\": %s,\n  \"targets\": [", a.method.c_str(),
                    converged ? "true" : "false");
        for (int k = 0; k < K; ++k)
        {
            std::printf("%s\n    {", k ? "," : "");
            for (int p = 0; p < EMVS_PARAM_COUNT; ++p)
                std::printf("%s\"%s\": %.6f", p ? ", " : "", param_keys[p], deg(rows[std::size_t(k)][std::size_t(p)]));
            std::printf("}");
        }
        std::printf("\n  ]\n}\n");
        return;
    }
    std::printf("target");
    for (const char *key : param_keys)
        std::printf(" %s", key);
    std::printf("\n");
    for (int k = 0; k < K; ++k)
    {
        std::printf("%d", k + 1);
        for (double v : rows[static_cast<std::size_t>(k)])
            std::printf(" %.6f", deg(v));
        std::printf("\n");
    }
    if (!converged)
        std::fprintf(stderr, "emvs: warning: ALS stopped at max_iters before converging\n");
}

int run_estimate(EstimateArgs a)
{
    emvs_scene *scene = nullptr;
    if (!a.config.empty())
    {
        if (int rc = report(emvs_scene_load(a.config.c_str(), &scene)))
            return rc;
        int sm = 0, sn = 0;
        emvs_scene_dims(scene, &sm, &sn, nullptr, nullptr);
        if (a.M == 0)
            a.M = sm;
        if (a.N == 0)
            a.N = sn;
    }
    if (a.M == 0 || a.N == 0)
    {
        emvs_scene_free(scene);
        std::cerr << "emvs: estimate needs --M and --N, or --config with a scene\n";
        return exit_usage;
    }
    const emvs_method method = a.method == "baseline" ? EMVS_METHOD_BASELINE : EMVS_METHOD_NESTED;

    emvs_dataset *data = nullptr;
    emvs_estimates *est = nullptr;
    emvs_status s = emvs_dataset_load(a.data.c_str(), a.M, a.N, &data);
    if (s == EMVS_OK)
        s = emvs_estimate(data, a.K, method, &a.als, &est);
    if (s == EMVS_OK && scene)
        s = emvs_estimates_match(est, scene);
    if (s == EMVS_OK)
        print_estimates(est, a);
    emvs_estimates_free(est);
    emvs_dataset_free(data);
    emvs_scene_free(scene);
    return report(s);
}

struct BenchArgs
{
    std::string config;
    std::string out;
    std::string manifest;
    std::string params_out;
    bool wall_time = false;
};

std::string default_manifest_path(const std::string &csv)
{
    const auto dot = csv.find_last_of('.');
    const auto slash = csv.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? csv.substr(0, dot) : csv) + ".manifest.json";
}

int run_bench(const BenchArgs &a)
{
    emvs_bench_config *cfg = nullptr;
    if (int rc = report(emvs_bench_config_load(a.config.c_str(), &cfg)))
        return rc;
    emvs_bench_result *res = nullptr;
    emvs_status s = emvs_bench_run(cfg, &res);
    if (s == EMVS_OK)
        s = emvs_bench_write_csv(res, a.out.c_str(), a.wall_time ? 1 : 0);
    if (s == EMVS_OK)
        s = emvs_bench_write_manifest(cfg, res, (a.manifest.empty() ? default_manifest_path(a.out) : a.manifest).c_str());
    if (s == EMVS_OK && !a.params_out.empty())
        s = emvs_bench_write_param_csv(res, a.params_out.c_str());
    emvs_bench_result_free(res);
    emvs_bench_config_free(cfg);
    return report(s);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Angle and polarization estimation for bistatic EMVS-MIMO radar"};
    app.set_version_flag("--version", std::string(emvs_version()));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "synthesize a snapshot tensor and write a dataset file");
    simulate->add_option("--config", sim.config, "scene or bench JSON")->required();
    auto *snr_opt = simulate->add_option("--snr", sim.snr, "signal-to-noise ratio in dB");
    auto *quiet_opt = simulate->add_flag("--noiseless", sim.noiseless, "no additive noise");
    snr_opt->excludes(quiet_opt);
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "dataset file to write")->required();

    EstimateArgs est;
    emvs_als_options_default(&est.als);
    auto *estimate = app.add_subcommand("estimate", "estimate the 8 parameters of every target");
    estimate->add_option("--data", est.data, "dataset file")->required();
    estimate->add_option("-K,--targets", est.K, "number of targets")->required()->check(CLI::PositiveNumber);
    estimate->add_option("--M", est.M, "transmit EMVS count")->check(CLI::Range(2, 1 << 20));
    estimate->add_option("--N", est.N, "receive EMVS count")->check(CLI::Range(2, 1 << 20));
    estimate->add_option("--config", est.config, "scene JSON; supplies M, N and the output order");
    estimate->add_option("--method", est.method, "nested or baseline")
        ->check(CLI::IsMember({"nested", "baseline"}))
        ->capture_default_str();
    estimate->add_option("--format", est.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    estimate->add_option("--max-iters", est.als.max_iters, "ALS sweep limit")->capture_default_str();
    estimate->add_option("--rel-tol", est.als.rel_tol, "ALS relative residual-change tolerance")
        ->capture_default_str();
    estimate->add_option("--restarts", est.als.restarts, "ALS random restarts")->capture_default_str();
    estimate->add_option("--seed", est.als.seed, "ALS initialization seed")->capture_default_str();

    BenchArgs bench;
    auto *bench_cmd = app.add_subcommand("bench", "Monte-Carlo RMSE-versus-SNR sweep");
    bench_cmd->add_option("--config", bench.config, "bench JSON")->required();
    bench_cmd->add_option("--out", bench.out, "results CSV")->required();
    bench_cmd->add_option("--manifest", bench.manifest, "manifest JSON (default: <out>.manifest.json)");
    bench_cmd->add_option("--params-out", bench.params_out, "per-parameter RMSE CSV");
    bench_cmd->add_flag("--wall-time", bench.wall_time, "record measured wall time in the CSV");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    if (simulate->parsed())
    {
        if (!sim.snr && !sim.noiseless)
        {
            std::cerr << "emvs: simulate needs --snr or --noiseless\n";
            return exit_usage;
        }
        return run_simulate(sim);
    }
    if (estimate->parsed())
        return run_estimate(est);
    return run_bench(bench);
}
