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

#include "emvs/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "emvs/assignment.hpp"

namespace emvs
{

using nlohmann::json;

namespace
{

const std::set<std::string> known_keys = {"M", "N", "L", "K", "targets", "snr_grid_db", "trials",
                                          "methods", "master_seed", "als", "noiseless", "threads"};
const std::array<const char *, 8> target_keys = {"theta_t_deg", "phi_t_deg", "gamma_t_deg",
                                                 "eta_t_deg", "theta_r_deg", "phi_r_deg",
                                                 "gamma_r_deg", "eta_r_deg"};

[[noreturn]] void config_error(const std::string &what)
{
    throw Error(ErrorCode::config, what);
}

json parse_document(std::string_view text)
{
    try
    {
        json doc = json::parse(text.begin(), text.end());
        if (!doc.is_object())
            config_error("config must be a JSON object");
        for (const auto &[key, value] : doc.items())
            if (!key.starts_with('_') && !known_keys.contains(key))
                config_error("unknown config key '" + key + "'");
        return doc;
    }
    catch (const json::parse_error &e)
    {
        config_error(std::string("malformed JSON: ") + e.what());
    }
}

template <typename T>
T get_required(const json &doc, const char *key)
{
    if (!doc.contains(key))
        config_error(std::string("missing config key '") + key + "'");
    try
    {
        return doc.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        config_error(std::string("config key '") + key + "': " + e.what());
    }
}

Scene scene_from(const json &doc)
{
    Scene scene;
    scene.M = get_required<Index>(doc, "M");
    scene.N = get_required<Index>(doc, "N");
    scene.L = get_required<Index>(doc, "L");
    const auto K = get_required<Index>(doc, "K");
    const json targets = get_required<json>(doc, "targets");
    if (!targets.is_array())
        config_error("'targets' must be an array");
    for (const json &t : targets)
    {
        std::array<double, 8> p{};
        for (std::size_t i = 0; i < target_keys.size(); ++i)
            p[i] = deg2rad(get_required<double>(t, target_keys[i]));
        scene.targets.push_back(TargetParams::from_array(p));
    }
    if (K != scene.K())
        config_error("K = " + std::to_string(K) + " but " + std::to_string(scene.K()) +
                     " targets are listed");
    try
    {
        scene.validate();
    }
    catch (const Error &e)
    {
        config_error(e.what());
    }
    return scene;
}

double squared_error(std::span<const double> est, std::span<const double> truth,
                     std::span<const bool> circular)
{
    if (est.size() != truth.size())
        fail(ErrorCode::dimension, "rmse: parameter vectors differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i)
    {
        const bool wrap = i < circular.size() && circular[i];
        const double d = wrap ? circular_difference(est[i], truth[i]) : est[i] - truth[i];
        sum += d * d;
    }
    return sum;
}

std::string format_double(const char *fmt, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

struct TrialOutcome
{
    bool ok = false;
    std::array<double, 8> sq_err{};
    double seconds = 0.0;
    std::string reason;
};

} // namespace

const char *to_string(Method m) { return m == Method::nested ? "nested" : "baseline"; }
const char *to_string(ParamGroup g) { return g == ParamGroup::angle ? "angle" : "polarization"; }

Method parse_method(std::string_view name)
{
    if (name == "nested")
        return Method::nested;
    if (name == "baseline")
        return Method::baseline;
    config_error("unknown method '" + std::string(name) + "' (expected nested or baseline)");
}

std::array<int, 4> group_members(ParamGroup g)
{
    if (g == ParamGroup::angle)
        return {0, 1, 4, 5};
    return {2, 3, 6, 7};
}

void BenchConfig::validate() const
{
    scene.validate();
    if (trials < 1)
        config_error("trials must be >= 1");
    if (snr_grid_db.empty())
        config_error("snr_grid_db must not be empty");
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i)
    {
        if (!std::isfinite(snr_grid_db[i]))
            config_error("snr_grid_db entries must be finite");
        if (i > 0 && snr_grid_db[i] <= snr_grid_db[i - 1])
            config_error("snr_grid_db must be strictly increasing");
    }
    if (methods.empty())
        config_error("methods must not be empty");
    try
    {
        als.validate();
    }
    catch (const Error &e)
    {
        config_error(e.what());
    }
}

Scene parse_scene(std::string_view json_text)
{
    return scene_from(parse_document(json_text));
}

BenchConfig parse_bench_config(std::string_view json_text)
{
    const json doc = parse_document(json_text);
    BenchConfig cfg;
    cfg.scene = scene_from(doc);
    cfg.snr_grid_db = get_required<std::vector<double>>(doc, "snr_grid_db");
    cfg.trials = get_required<int>(doc, "trials");
    cfg.methods.clear();
    for (const std::string &m : get_required<std::vector<std::string>>(doc, "methods"))
        cfg.methods.push_back(parse_method(m));
    cfg.master_seed = get_required<std::uint64_t>(doc, "master_seed");
    const json als = get_required<json>(doc, "als");
    cfg.als.max_iters = get_required<int>(als, "max_iters");
    cfg.als.rel_tol = get_required<double>(als, "rel_tol");
    cfg.als.restarts = get_required<int>(als, "restarts");
    if (als.contains("seed"))
        cfg.als.seed = get_required<std::uint64_t>(als, "seed");
    if (doc.contains("noiseless"))
        cfg.noiseless = get_required<bool>(doc, "noiseless");
    if (doc.contains("threads"))
        cfg.threads = get_required<unsigned>(doc, "threads");
    cfg.validate();
    return cfg;
}

BenchConfig load_bench_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        config_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_config(ss.str());
}

std::string bench_config_to_json(const BenchConfig &cfg)
{
    json doc;
    doc["M"] = cfg.scene.M;
    doc["N"] = cfg.scene.N;
    doc["L"] = cfg.scene.L;
    doc["K"] = cfg.scene.K();
    doc["targets"] = json::array();
    for (const TargetParams &t : cfg.scene.targets)
    {
        json jt;
        const auto p = t.as_array();
        for (std::size_t i = 0; i < p.size(); ++i)
            jt[target_keys[i]] = rad2deg(p[i]);
        doc["targets"].push_back(jt);
    }
    doc["snr_grid_db"] = cfg.snr_grid_db;
    doc["noiseless"] = cfg.noiseless;
    doc["trials"] = cfg.trials;
    doc["methods"] = json::array();
    for (Method m : cfg.methods)
        doc["methods"].push_back(to_string(m));
    doc["master_seed"] = cfg.master_seed;
    doc["als"] = {{"max_iters", cfg.als.max_iters},
                  {"rel_tol", cfg.als.rel_tol},
                  {"restarts", cfg.als.restarts},
                  {"seed", cfg.als.seed}};
    return doc.dump(2);
}

double circular_difference(double a, double b)
{
    double d = std::remainder(a - b, 2.0 * pi);
    return d >= pi ? d - 2.0 * pi : d;
}

double rmse(const std::vector<std::vector<ParamVector>> &estimates,
            const std::vector<std::vector<ParamVector>> &truth, std::span<const bool> circular)
{
    if (estimates.empty())
        fail(ErrorCode::argument, "rmse: no trials");
    if (estimates.size() != truth.size())
        fail(ErrorCode::dimension, "rmse: trial counts differ");
    const std::size_t K = estimates.front().size();
    if (K == 0)
        fail(ErrorCode::argument, "rmse: no targets");
    double sum = 0.0;
    for (std::size_t t = 0; t < estimates.size(); ++t)
    {
        if (estimates[t].size() != K || truth[t].size() != K)
            fail(ErrorCode::dimension, "rmse: target counts differ between trials");
        for (std::size_t k = 0; k < K; ++k)
            sum += squared_error(estimates[t][k], truth[t][k], circular);
    }
    return std::sqrt(sum / static_cast<double>(estimates.size() * K));
}

std::vector<TargetParams> match_to_truth(const std::vector<TargetEstimate> &estimates,
                                         const std::vector<TargetParams> &truth)
{
    if (estimates.size() != truth.size())
        fail(ErrorCode::dimension, "match_to_truth: estimate and truth counts differ");
    const auto K = static_cast<Index>(truth.size());
    Eigen::MatrixXd cost(K, K); // row: truth, col: estimate
    for (Index i = 0; i < K; ++i)
        for (Index j = 0; j < K; ++j)
            cost(i, j) = squared_error(estimates[static_cast<std::size_t>(j)].params.as_array(),
                                       truth[static_cast<std::size_t>(i)].as_array(), circular_params);
    const std::vector<Index> truth_to_est = solve_assignment(cost);
    std::vector<TargetParams> out;
    for (Index i = 0; i < K; ++i)
        out.push_back(estimates[static_cast<std::size_t>(truth_to_est[static_cast<std::size_t>(i)])].params);
    return out;
}

BenchResult run_sweep(const BenchConfig &cfg)
{
    cfg.validate();
    const Scene &scene = cfg.scene;
    const Index K = scene.K();
    const Identifiability id = check_identifiability(scene.M, scene.N, K, scene.L);
    if (!id.passes)
        fail(ErrorCode::identifiability, "bench scene is not identifiable: violates " + id.violations());

    const std::size_t n_snr = cfg.snr_grid_db.size();
    const auto n_trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t n_methods = cfg.methods.size();
    std::vector<TrialOutcome> outcomes(n_snr * n_trials * n_methods);

    const auto run_task = [&](std::size_t task) {
        const std::size_t s = task / n_trials, t = task % n_trials;
        const std::uint64_t seed = derive_seed(cfg.master_seed, {s, t});
        const std::optional<double> snr =
            cfg.noiseless ? std::nullopt : std::optional<double>(cfg.snr_grid_db[s]);
        const SnapshotData data = synthesize(scene, snr, seed);
        AlsOptions als = cfg.als;
        als.seed = derive_seed(seed, {2, cfg.als.seed});

        for (std::size_t mi = 0; mi < n_methods; ++mi)
        {
            TrialOutcome &out = outcomes[task * n_methods + mi];
            const auto start = std::chrono::steady_clock::now();
            try
            {
                const EstimationReport report = cfg.methods[mi] == Method::nested
                                                    ? estimate_nested(data, K, als)
                                                    : estimate_baseline_parafac(data, K, als);
                bool converged = true;
                for (const AlsReport &r : report.als)
                    converged = converged && r.converged;
                if (!converged)
                {
                    out.reason = "ALS did not converge within max_iters";
                }
                else
                {
                    const std::vector<TargetParams> matched = match_to_truth(report.targets, scene.targets);
                    for (std::size_t k = 0; k < matched.size(); ++k)
                    {
                        const auto est = matched[k].as_array();
                        const auto truth = scene.targets[k].as_array();
                        for (std::size_t i = 0; i < 8; ++i)
                        {
                            const double d = circular_params[i] ? circular_difference(est[i], truth[i])
                                                                : est[i] - truth[i];
                            out.sq_err[i] += d * d;
                        }
                    }
                    out.ok = true;
                }
            }
            catch (const Error &e)
            {
                out.reason = e.what();
            }
            out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };

    const auto wall_start = std::chrono::steady_clock::now();
    const std::size_t n_tasks = n_snr * n_trials;
    unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
    if (n_threads <= 1)
    {
        for (std::size_t task = 0; task < n_tasks; ++task)
            run_task(task);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t task = next++; task < n_tasks; task = next++)
                {
                    try
                    {
                        run_task(task);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                    }
                }
            });
        for (std::thread &th : pool)
            th.join();
        if (error)
            std::rethrow_exception(error);
    }

    // Reduction in (snr, method, trial) index order.
    BenchResult result;
    for (std::size_t s = 0; s < n_snr; ++s)
        for (std::size_t mi = 0; mi < n_methods; ++mi)
        {
            std::array<double, 8> sum{};
            int used = 0;
            double seconds = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t)
            {
                const TrialOutcome &o = outcomes[(s * n_trials + t) * n_methods + mi];
                seconds += o.seconds;
                if (!o.ok)
                {
                    result.failures.push_back({cfg.snr_grid_db[s], cfg.methods[mi], static_cast<int>(t), o.reason});
                    continue;
                }
                ++used;
                for (std::size_t i = 0; i < 8; ++i)
                    sum[i] += o.sq_err[i];
            }
            const int failed = cfg.trials - used;
            if (5 * failed > cfg.trials)
                fail(ErrorCode::numerical,
                     "sweep point snr_db=" + format_double("%g", cfg.snr_grid_db[s]) + ", method=" +
                         to_string(cfg.methods[mi]) + ": " + std::to_string(failed) + "/" +
                         std::to_string(cfg.trials) + " trials failed (limit 20%)");

            const double denom = static_cast<double>(used) * static_cast<double>(K);
            ParamRow pr{cfg.snr_grid_db[s], cfg.methods[mi], {}, used};
            for (std::size_t i = 0; i < 8; ++i)
                pr.rmse[i] = std::sqrt(sum[i] / denom);
            result.per_param.push_back(pr);
            for (ParamGroup g : {ParamGroup::angle, ParamGroup::polarization})
            {
                double group_sum = 0.0;
                for (int i : group_members(g))
                    group_sum += sum[static_cast<std::size_t>(i)];
                result.rows.push_back({cfg.snr_grid_db[s], cfg.methods[mi], g,
                                       std::sqrt(group_sum / denom), used, seconds});
            }
        }
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return result;
}

std::string results_csv(const BenchResult &result, bool with_wall_time)
{
    std::string out = "snr_db,method,param_group,rmse_rad,trials_used,wall_time_s\n";
    for (const BenchRow &r : result.rows)
    {
        out += format_double("%g", r.snr_db) + "," + to_string(r.method) + "," + to_string(r.group) +
               "," + format_double("%.9e", r.rmse) + "," + std::to_string(r.trials_used) + "," +
               format_double("%.3f", with_wall_time ? r.wall_time_s : 0.0) + "\n";
    }
    return out;
}

std::string per_param_csv(const BenchResult &result)
{
    std::string out = "snr_db,method";
    for (const char *name : param_names)
        out += std::string(",") + name;
    out += ",trials_used\n";
    for (const ParamRow &r : result.per_param)
    {
        out += format_double("%g", r.snr_db) + "," + to_string(r.method);
        for (double v : r.rmse)
            out += "," + format_double("%.9e", v);
        out += "," + std::to_string(r.trials_used) + "\n";
    }
    return out;
}

std::string config_hash(const BenchConfig &cfg)
{
    const std::string canonical = json::parse(bench_config_to_json(cfg)).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_json(const BenchConfig &cfg, const BenchResult &result)
{
    json doc;
    doc["software"] = "emvs-parafac";
    doc["version"] = EMVS_VERSION;
    doc["config_hash"] = "fnv1a64:" + config_hash(cfg);
    doc["master_seed"] = cfg.master_seed;
    doc["config"] = json::parse(bench_config_to_json(cfg));
    doc["rows"] = result.rows.size();
    doc["wall_time_s"] = result.wall_time_s;
    doc["failed_trials"] = json::array();
    for (const FailedTrial &f : result.failures)
        doc["failed_trials"].push_back(
            {{"snr_db", f.snr_db}, {"method", to_string(f.method)}, {"trial", f.trial}, {"reason", f.reason}});
    return doc.dump(2) + "\n";
}

} // namespace emvs
